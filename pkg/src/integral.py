"""
Module d'évaluation de l'intégrale double magnétique I₂(f).

I₂(f) = (1+f)·∬_{π/2>α>β>0} dα dβ / √(((1+f)²-4f cos²α)((1+f)²-4f sin²β))

Fonctionnalités:
    - Coefficients a_n de la partie impaire (récurrence exacte)
    - Réduction de f vers [0, √2-1] (inversion, réflexion, involution)
    - Évaluation rapide par AGM + série impaire, oracle par quadrature
    - Développements exacts en f (I₂) et en h (Y, T, S₀)
    - Vérification des deux équations différentielles au niveau des séries

Utilisation:
    from src.integral import i2_eval

    value = i2_eval("0.3")
"""

import logging
import math
from fractions import Fraction
from typing import List, Optional

from mpmath import mp, mpf
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.config import Config
from src.errors import (
    ConsistencyError,
    DomainError,
    InsufficientOrderError,
    PoleError,
    UnsupportedPrecisionError,
)
from src.precision import PrecisionContext, agm, resolve_context, sqrt2, to_big_real
from src.series import (
    ExactSeries,
    PiQuadratic,
    apply_L,
    coefficient_value,
    pochhammer,
    series_mul,
    series_reciprocal,
    theta_apply,
    theta_poly_apply,
)

# Configuration du logger pour ce module
logger = logging.getLogger(__name__)

# Étapes de réduction reconnues
STEP_KINDS = ("negative", "inverse", "involution")

# Normalisation Y(h(f)) = κ·(1+f)·I₂(f), fixée en f = 0
KAPPA = 4

# Coefficients a_n déjà calculés (a_0 = 1)
_A_CACHE: List[Fraction] = [Fraction(1)]


class ReductionStep(BaseModel):
    """Une étape de la chaîne de réduction (f_before → f_after)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: str = Field(..., json_schema_extra={"example": "involution"})
    f_before: mpf
    f_after: mpf

    @field_validator("kind")
    def kind_ok(cls, v):
        if v not in STEP_KINDS:
            raise ValueError(f"Étape de réduction inconnue: {v}. Étapes valides: {', '.join(STEP_KINDS)}")
        return v


class ReductionTrace(BaseModel):
    """
    Plan d'évaluation de I₂(f): suite d'identités exactes menant de f à
    final_f ∈ [0, √2-1].
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    input_f: mpf
    steps: List[ReductionStep] = []
    final_f: mpf

    @property
    def kinds(self) -> List[str]:
        return [step.kind for step in self.steps]


class SeriesCoeffTable(BaseModel):
    """Tables exactes a_n, T(n) et S₀(n) jusqu'à un même ordre."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: List[Fraction]
    T: List[Fraction]
    S0: List[PiQuadratic]

    @field_validator("a")
    def a_ok(cls, v):
        if not v or v[0] != 1:
            raise ValueError("La table a doit commencer par a₀ = 1")
        return v


class SeriesResidual(BaseModel):
    """Résidu exact d'une identité entre séries, vérifié jusqu'à un ordre."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    identity: str
    order: int
    nonzero_orders: List[int] = []
    rational_zero: bool = True
    pi_zero: bool = True

    @property
    def is_zero(self) -> bool:
        return not self.nonzero_orders


def _residual(identity: str, lhs: ExactSeries, rhs: ExactSeries, order: int) -> SeriesResidual:
    nonzero, rational_zero, pi_zero = [], True, True
    for n in range(order + 1):
        d = PiQuadratic(0) + lhs[n] - rhs[n]
        if d:
            nonzero.append(n)
            rational_zero = rational_zero and d.r == 0
            pi_zero = pi_zero and d.s == 0
    return SeriesResidual(
        identity=identity,
        order=order,
        nonzero_orders=nonzero,
        rational_zero=rational_zero,
        pi_zero=pi_zero,
    )


# ---- Coefficients exacts ----

def a_coeffs(n_max: int) -> List[Fraction]:
    """
    Coefficients a_0..a_N de la partie impaire de I₂(f)/(1+f).

    (2n+1)³a_n = 4n(4n²+1)a_{n-1} - (2n-1)³a_{n-2} + 8(-1)ⁿn, a_{-1} = 0, a_0 = 1.

    Example:
        >>> a_coeffs(2)
        [Fraction(1, 1), Fraction(4, 9), Fraction(89, 225)]
    """
    if n_max < 0:
        raise DomainError(f"Ordre négatif: {n_max}")
    while len(_A_CACHE) <= n_max:
        n = len(_A_CACHE)
        prev2 = _A_CACHE[n - 2] if n >= 2 else Fraction(0)
        rhs = 4 * n * (4 * n * n + 1) * _A_CACHE[n - 1] - (2 * n - 1) ** 3 * prev2 + 8 * (-1) ** n * n
        _A_CACHE.append(rhs / (2 * n + 1) ** 3)
    return _A_CACHE[: n_max + 1]


def t_coeffs(n_max: int) -> List[Fraction]:
    """T(0..N): T(0) = 0, 2T(n+1) - T(n) = (1/2)_n/n!."""
    out = [Fraction(0)]
    for n in range(n_max):
        out.append((out[n] + pochhammer(Fraction(1, 2), n) / math.factorial(n)) / 2)
    return out


def y_coeffs(n_max: int) -> List[PiQuadratic]:
    """
    S₀(0..N), coefficients de Y(h) = Σ S₀(n)hⁿ.

    Récurrence à trois termes, sans les sommes auxiliaires:
    ¼(n+1)³S₀(n+1) = ⅛(2n+1)(2n²+2n+1)S₀(n) - ¼n³S₀(n-1) + ½nT(n) - (1/2)_{n+1}/(2·n!)
    avec S₀(0) = π²/2.
    """
    t = t_coeffs(n_max)
    out = [PiQuadratic(0, Fraction(1, 2))]
    for n in range(n_max):
        prev = out[n - 1] if n >= 1 else PiQuadratic(0)
        rhs = (
            Fraction((2 * n + 1) * (2 * n * n + 2 * n + 1), 8) * out[n]
            - Fraction(n ** 3, 4) * prev
            + Fraction(n, 2) * t[n]
            - pochhammer(Fraction(1, 2), n + 1) / (2 * math.factorial(n))
        )
        out.append(rhs * Fraction(4, (n + 1) ** 3))
    return out


def series_coeff_table(n_max: int) -> SeriesCoeffTable:
    """Regroupe a, T et S₀ jusqu'à l'ordre N."""
    return SeriesCoeffTable(a=a_coeffs(n_max), T=t_coeffs(n_max), S0=y_coeffs(n_max))


def _central_binomial_square_series(order: int) -> ExactSeries:
    """Σ ((1/2)_n/n!)² f^{2n}, tronquée à l'ordre donné en f."""
    coeffs = [Fraction(0)] * (order + 1)
    for n in range(order // 2 + 1):
        coeffs[2 * n] = (pochhammer(Fraction(1, 2), n) / math.factorial(n)) ** 2
    return ExactSeries(coeffs)


def i2_series(order: int) -> ExactSeries:
    """
    Développement exact de I₂(f) en f, coefficients PiQuadratic.

    I₂(f) = (1+f)·[(π²/8)·(Σ((1/2)_n/n!)²f^{2n})² - Σ a_n f^{2n+1}]

    Raises:
        InsufficientOrderError: si order < 4
    """
    if order < 4:
        raise InsufficientOrderError(f"i2_series demande un ordre >= 4 (reçu {order})")

    g = _central_binomial_square_series(order)
    g2 = series_mul(g, g)
    a = a_coeffs(order // 2)

    inner = []
    for k in range(order + 1):
        if k % 2 == 0:
            inner.append(PiQuadratic(0, g2[k] / 8))
        else:
            inner.append(PiQuadratic(-a[(k - 1) // 2]))

    return series_mul(ExactSeries.from_polynomial([1, 1], order), ExactSeries(inner))


def _theorem1_rhs(order: int) -> ExactSeries:
    """Série de 2(2f/(1+f²))² - 1."""
    x = ExactSeries.from_polynomial([0, 2], order)
    ratio = series_mul(x, series_reciprocal(ExactSeries.from_polynomial([1, 0, 1], order)))
    return series_mul(ratio, ratio).scale(2) - 1


def verify_theorem1(order: int) -> SeriesResidual:
    """
    L(f, θ)·I₂(f) = 2(2f/(1+f²))² - 1 au niveau des séries, jusqu'à l'ordre N-4.

    Les contributions en π² doivent s'annuler exactement.
    """
    lhs = apply_L(i2_series(order))
    check_order = order - 4
    result = _residual("L·I₂ = 2(2f/(1+f²))² - 1", lhs, _theorem1_rhs(check_order), check_order)
    logger.debug(f"Équation en f vérifiée jusqu'à l'ordre {check_order}: {result.is_zero}")
    return result


def _theorem2_rhs(order: int) -> ExactSeries:
    """Série de -(4-4h-h²)·h·(2-h)^{-2}·(1-h)^{-1/2}."""
    inv_two_minus_h = series_reciprocal(ExactSeries.from_polynomial([2, -1], order))
    inv_sqrt = ExactSeries(
        [pochhammer(Fraction(1, 2), n) / math.factorial(n) for n in range(order + 1)]
    )
    poly = ExactSeries.from_polynomial([0, -4, 4, 1], order)
    return series_mul(series_mul(poly, series_mul(inv_two_minus_h, inv_two_minus_h)), inv_sqrt)


def verify_theorem2(order: int) -> SeriesResidual:
    """
    θ³Y - ½h(2θ+1)(2θ²+2θ+1)Y + h²(θ+1)³Y = -(4-4h-h²)h/((2-h)²√(1-h))
    pour Y(h) = Σ S₀(n)hⁿ, exactement jusqu'à l'ordre N.
    """
    if order < 10:
        raise InsufficientOrderError(f"verify_theorem2 demande un ordre >= 10 (reçu {order})")

    y = ExactSeries(y_coeffs(order + 2))
    first = theta_apply(y, 3)
    second = theta_poly_apply(y, [1, 4, 6, 4]).mul_x(1).scale(Fraction(1, 2))
    third = theta_poly_apply(y, [1, 3, 3, 1]).mul_x(2)
    lhs = first - second + third
    return _residual("opérateur en h appliqué à Y", lhs, _theorem2_rhs(order), order)


# ---- Évaluation numérique ----

def reduce_f(f, ctx: PrecisionContext = None) -> ReductionTrace:
    """
    Ramène f dans [0, √2-1] par des identités exactes.

    Étapes (dans cet ordre, répétées au besoin):
        inverse:    |f| > 1,          I₂(f) = I₂(1/f)/f
        negative:   f < 0,            I₂(f) = (1+f)[J(f) - I₂(-f)/(1-f)]
        involution: f > √2-1,         I₂(f) = I₂((1-f)/(1+f))

    Raises:
        PoleError: si f = -1
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        f = to_big_real(f, ctx.inner())
        if f == -1:
            raise PoleError("I₂ présente un pôle en f = -1")

        threshold = sqrt2(ctx.inner()) - 1
        steps = []
        current = f
        while True:
            if abs(current) > 1:
                kind, nxt = "inverse", 1 / current
            elif current < 0:
                kind, nxt = "negative", -current
            elif current > threshold:
                kind, nxt = "involution", (1 - current) / (1 + current)
            else:
                break
            steps.append(ReductionStep(kind=kind, f_before=current, f_after=nxt))
            current = nxt

    return ReductionTrace(input_f=f, steps=steps, final_f=current)


def _odd_part(x: mpf, ctx: PrecisionContext) -> mpf:
    """Σ a_n x^{2n+1} tronquée par la borne géométrique C·x^{2N+3}/(1-x²)."""
    if x == 0:
        return mpf(0)
    x2 = x * x
    eps = mpf(10) ** (-ctx.working_digits)
    if x2 < eps:
        return +x
    log_ratio = float(-mp.log(x2))
    n_terms = int(math.ceil(ctx.working_digits * math.log(10) / log_ratio)) + 2
    a = a_coeffs(n_terms)
    bound = 2 * max(1, max(abs(float(c)) for c in a))

    total = mpf(0)
    power = x
    for n, c in enumerate(a):
        total += (mpf(c.numerator) / c.denominator) * power
        power *= x2
        if bound * power / (1 - x2) < eps:
            break
    else:
        logger.warning(f"⚠ Borne de reste non atteinte pour x={mp.nstr(x, 10)} après {n_terms} termes")
    return total


def _i2_base(x: mpf, ctx: PrecisionContext) -> mpf:
    """I₂(x) pour x ∈ [0, √2-1]: AGM pour la partie paire, série pour l'impaire."""
    g = agm(1 + x, 1 - x, ctx)
    even = mp.pi ** 2 / (8 * g * g)
    return (1 + x) * (even - _odd_part(x, ctx))


def j_function(f, ctx: PrecisionContext = None) -> mpf:
    """
    J(f) = (π/2)²/agm(1+f, 1-f)² = I₂(f)/(1+f) + I₂(-f)/(1-f), fonction paire.

    Raises:
        DomainError: si |f| >= 1
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        f = to_big_real(f, ctx.inner())
        if abs(f) >= 1:
            raise DomainError(f"J(f) n'est définie que pour |f| < 1 (reçu {f})")
        g = agm(1 + f, 1 - f, ctx.inner())
        result = (mp.pi / 2) ** 2 / (g * g)
    return ctx.round(result)


def i2_eval(f, ctx: PrecisionContext = None) -> mpf:
    """
    Évalue I₂(f) pour tout réel f ≠ -1.

    Args:
        f: réel (int, Fraction, chaîne décimale ou mpf)
        ctx (PrecisionContext, optional): contexte de précision

    Returns:
        mpf: I₂(f) arrondi à ctx.digits

    Raises:
        PoleError: si f = -1

    Example:
        >>> i2_eval(0)   # π²/8
        mpf('1.2337005501361698273543113749845188919142124259053')
    """
    ctx = resolve_context(ctx)
    inner = ctx.inner()
    with ctx.workdps():
        trace = reduce_f(f, inner)
        value = _i2_base(trace.final_f, inner)

        # Remontée de la chaîne: chaque étape applique son identité exacte
        for step in reversed(trace.steps):
            b = step.f_before
            if step.kind == "inverse":
                value = value / b
            elif step.kind == "negative":
                value = (1 + b) * (j_function(b, inner) - value / (1 - b))

    return ctx.round(value)


def i2_quadrature(f, target_digits: int = 30) -> mpf:
    """
    Oracle indépendant: quadrature tanh-sinh imbriquée de l'intégrale double.

    Le triangle π/2 > α > β > 0 est ramené au rectangle par β = α·t.

    Raises:
        UnsupportedPrecisionError: si target_digits dépasse ORACLE_MAX_DIGITS
        DomainError: si |f| >= 1
    """
    if target_digits > Config.ORACLE_MAX_DIGITS:
        raise UnsupportedPrecisionError(
            f"L'oracle par quadrature est limité à {Config.ORACLE_MAX_DIGITS} chiffres "
            f"(demandé: {target_digits})"
        )
    with mp.workdps(target_digits + 10):
        f = mpf(f) if not isinstance(f, Fraction) else mpf(f.numerator) / f.denominator
        if abs(f) >= 1:
            raise DomainError(f"L'oracle requiert |f| < 1 (reçu {f})")
        g = (1 + f) ** 2

        def integrand(alpha, t):
            beta = alpha * t
            return alpha / mp.sqrt((g - 4 * f * mp.cos(alpha) ** 2) * (g - 4 * f * mp.sin(beta) ** 2))

        value = (1 + f) * mp.quad(integrand, [0, mp.pi / 2], [0, 1])
    with mp.workdps(target_digits):
        return +value


def hall_relation_check(ctx: PrecisionContext = None) -> mpf:
    """
    Au point fixe f_c = √2-1 de l'involution: 2f_c·I₂(f_c) = I₂(-f_c).

    Returns:
        mpf: |2f_c·I₂(f_c) - I₂(-f_c)|
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        fc = sqrt2(ctx.inner()) - 1
        lhs = 2 * fc * i2_eval(fc, ctx)
        rhs = i2_eval(-fc, ctx)
        return abs(lhs - rhs)


# ---- Lien entre les variables f et h ----

def h_of_f(f, ctx: PrecisionContext = None) -> mpf:
    """h = 4f/(1+f)²."""
    ctx = resolve_context(ctx)
    with ctx.workdps():
        f = to_big_real(f, ctx.inner())
        if f == -1:
            raise PoleError("h(f) présente un pôle en f = -1")
        return 4 * f / (1 + f) ** 2


def y_eval(h, ctx: PrecisionContext = None, max_terms: int = 5000):
    """
    Y(h) = Σ S₀(n)hⁿ pour |h| < 1.

    Returns:
        tuple: (valeur, estimation du reste)

    Raises:
        DomainError: si |h| >= 1 ou si max_terms ne suffit pas
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        h = to_big_real(h, ctx.inner())
        if abs(h) >= 1:
            raise DomainError(f"Y(h) n'est définie ici que pour |h| < 1 (reçu {h})")
        if h == 0:
            return ctx.round(coefficient_value(y_coeffs(0)[0], ctx.inner())), mpf(0)

        needed = int(math.ceil(ctx.working_digits * math.log(10) / -math.log(float(abs(h))))) + 20
        if needed > max_terms:
            raise DomainError(f"|h| = {mp.nstr(abs(h), 5)} trop proche de 1: {needed} termes requis")

        coeffs = y_coeffs(needed)
        total = mpf(0)
        power = mpf(1)
        for c in coeffs:
            total += coefficient_value(c, ctx.inner()) * power
            power *= h
        tail = abs(coefficient_value(coeffs[-1], ctx.inner()) * power) / (1 - abs(h))
    return ctx.round(total), tail


def y_from_i2(f, ctx: PrecisionContext = None):
    """
    Y(h(f)) calculé par κ·(1+f)·I₂(f).

    Returns:
        tuple: (h, Y(h))
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        h = h_of_f(f, ctx.inner())
        value = KAPPA * (1 + to_big_real(f, ctx.inner())) * i2_eval(f, ctx.inner())
    return ctx.round(h), ctx.round(value)


def kappa_normalisation(ctx: PrecisionContext = None) -> int:
    """
    Fixe κ = Y(0)/I₂(0) et vérifie qu'il vaut 2, 4 ou 8.

    Raises:
        ConsistencyError: si le rapport n'est pas un de ces entiers
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        ratio = coefficient_value(y_coeffs(0)[0], ctx.inner()) / i2_eval(0, ctx.inner())
        kappa = int(mp.nint(ratio))
        if kappa not in (2, 4, 8) or abs(ratio - kappa) > ctx.tolerance(5):
            raise ConsistencyError(f"Normalisation κ = {mp.nstr(ratio, 20)} hors de {{2, 4, 8}}")
    logger.debug(f"Normalisation κ = {kappa}")
    return kappa


def i2_residual_at(f, ctx: PrecisionContext = None, other: Optional[mpf] = None) -> mpf:
    """|I₂(f) - I₂((1-f)/(1+f))| (ou |I₂(f) - other| si une valeur est fournie)."""
    ctx = resolve_context(ctx)
    with ctx.workdps():
        f = to_big_real(f, ctx.inner())
        reference = other if other is not None else i2_eval((1 - f) / (1 + f), ctx)
        return abs(i2_eval(f, ctx) - reference)
