"""Exception hierarchy. Every validation failure carries its witness."""


class ValidationError(ValueError):
    """Base class for input that fails an axiom, bound or format rule."""


class MatrixShapeError(ValidationError):
    pass


class NonFiniteEntry(ValidationError):
    def __init__(self, i, j, value):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"non-finite entry at ({i},{j}): {value!r}")


class NonzeroDiagonal(ValidationError):
    def __init__(self, i, value):
        self.i, self.value = i, value
        super().__init__(f"nonzero diagonal at ({i},{i}): {value!r}")


class AsymmetricEntry(ValidationError):
    def __init__(self, i, j, a, b):
        self.i, self.j = i, j
        super().__init__(f"asymmetric entry ({i},{j}): {a!r} != {b!r}")


class NonpositiveOffDiagonal(ValidationError):
    def __init__(self, i, j, value):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"nonpositive off-diagonal entry at ({i},{j}): {value!r}")


class TriangleViolation(ValidationError):
    """``d(x, z) > d(x, via) + d(via, z)``."""

    def __init__(self, x, z, via, lhs, rhs):
        self.x, self.z, self.via = x, z, via
        self.witness = (x, z, via)
        super().__init__(
            f"triangle inequality fails for ({x},{z}) via {via}: {lhs!r} > {rhs!r}"
        )


class StrongTriangleViolation(ValidationError):
    """``rho(x, z) > max(rho(x, via), rho(via, z))``."""

    def __init__(self, x, z, via, lhs, rhs):
        self.x, self.z, self.via = x, z, via
        self.witness = (x, z, via)
        super().__init__(
            f"strong triangle inequality fails for ({x},{z}) via {via}: "
            f"{lhs!r} > {rhs!r}"
        )


class HypothesisViolated(ValidationError):
    """The subset ultrametric is not sandwiched as ``d <= rho <= D*d``."""

    def __init__(self, pair, side, rho_value, d_value, D):
        self.pair, self.side = pair, side
        self.rho_value, self.d_value, self.D = rho_value, d_value, D
        if side == "lower":
            detail = f"rho={rho_value!r} < d={d_value!r}"
        else:
            detail = f"rho={rho_value!r} > D*d={D * d_value!r}"
        super().__init__(f"hypothesis fails on subset pair {pair} ({side}): {detail}")


class DominanceViolated(ValidationError):
    def __init__(self, pair, value, bound):
        self.pair, self.value, self.bound = pair, value, bound
        super().__init__(f"ultrametric does not dominate d on {pair}: {value!r} < {bound!r}")


class MatrixFormatError(ValidationError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
