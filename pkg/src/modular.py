"""
Module des formes modulaires de niveau 2 utilisées par MagAGM.

Fonctionnalités:
    - Quotients êta: développements en q exacts et valeurs ponctuelles
    - f² et ψ = 64(η₂/η₁)²⁴ comme séries entières
    - Table de Fourier A(n) de φ(τ) avec test d'intégralité exact
    - φ(τ) ponctuelle, identités de translation et de Fricke
    - Valeurs CM exactes dans ℚ[√2] (sympy) et invariant j

Utilisation:
    from src.modular import phi_qexp

    table = phi_qexp(100)
    print(table.A[:3])   # [1, -44, 1126]
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List

import sympy as sp
from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.errors import ConsistencyError, DomainError, PoleError, TruncationError
from src.precision import (
    PrecisionContext,
    agm,
    gamma_quarter,
    gamma_rational,
    resolve_context,
    to_big_real,
)
from src.series import ExactSeries, series_mul, series_pow, series_reciprocal

# Configuration du logger pour ce module
logger = logging.getLogger(__name__)

# Facteurs des quotients êta utilisés (niveau, exposant)
F_SQUARED_FACTORS = ((1, 8), (4, 16), (2, -24))
F_PRIME_SQUARED_FACTORS = ((1, 16), (4, 8), (2, -24))
PSI_FACTORS = ((2, 24), (1, -24))
PHI_WEIGHT_FACTORS = ((1, 4), (2, 4))

# Au-delà de ce module de q, τ est réduit par SL₂(ℤ) avant la série pentagonale
ETA_DIRECT_MAX_Q = "0.9"


@lru_cache(maxsize=None)
def _euler_product(level: int, order: int) -> tuple:
    """Coefficients de ∏(1 - q^{mk}) par le théorème des nombres pentagonaux."""
    coeffs = [0] * (order + 1)
    k = 0
    while True:
        hits = 0
        for j in ((k, -k) if k else (0,)):
            e = level * j * (3 * j - 1) // 2
            if e <= order:
                coeffs[e] += -1 if j % 2 else 1
                hits += 1
        if not hits:
            break
        k += 1
    return tuple(coeffs)


def eta_qexp(level: int, order: int) -> ExactSeries:
    """
    η_m = q^{m/24}·∏(1 - q^{mk}) en série entière tronquée.

    Raises:
        DomainError: si level < 1
    """
    if level < 1:
        raise DomainError(f"Niveau êta invalide: {level}")
    return ExactSeries(_euler_product(level, order), Fraction(level, 24))


@dataclass(frozen=True)
class EtaQuotient:
    """
    Quotient ∏ η_m^{e_m}.

    Attributes:
        factors (tuple): couples (niveau, exposant)

    Example:
        >>> EtaQuotient(((2, 24), (1, -24))).prefactor
        Fraction(1, 1)
    """

    factors: tuple

    def __post_init__(self):
        factors = tuple((int(m), int(e)) for m, e in self.factors)
        for m, _ in factors:
            if m < 1:
                raise DomainError(f"Niveau êta invalide: {m}")
        object.__setattr__(self, "factors", factors)

    @property
    def prefactor(self) -> Fraction:
        return Fraction(sum(m * e for m, e in self.factors), 24)

    def qexp(self, order: int) -> ExactSeries:
        """Développement exact: q^{Σ m·e/24}·(série à coefficients entiers)."""
        result = ExactSeries.constant(1, order)
        for m, e in self.factors:
            base = ExactSeries(_euler_product(m, order))
            result = series_mul(result, series_pow(base, e))
        return ExactSeries(result.coeffs, self.prefactor)

    def value(self, tau, ctx: PrecisionContext = None) -> mpc:
        """Valeur ponctuelle ∏ η_m(τ)^{e_m}."""
        ctx = resolve_context(ctx)
        with ctx.workdps():
            result = mpc(1)
            for m, e in self.factors:
                result *= eta_eval(m, tau, ctx.inner()) ** e
        return ctx.round(result)


def f_squared_qexp(order: int) -> ExactSeries:
    """
    f² = 16(η₁η₄²/η₂³)⁸ de préfacteur q, contrôlé contre 1 - (η₁²η₄/η₂³)⁸.

    Raises:
        ConsistencyError: si les deux expressions diffèrent
    """
    if order < 1:
        raise DomainError(f"f_squared_qexp demande un ordre >= 1 (reçu {order})")
    first = EtaQuotient(F_SQUARED_FACTORS).qexp(order).scale(16)
    second = 1 - EtaQuotient(F_PRIME_SQUARED_FACTORS).qexp(order + 1)
    if not first.equals_through(second, order + 1):
        raise ConsistencyError("Les deux expressions de f² en quotients êta diffèrent")
    return first


def psi_qexp(order: int) -> ExactSeries:
    """ψ = 64(η₂/η₁)²⁴ = 64q·(série entière)."""
    return EtaQuotient(PSI_FACTORS).qexp(order).scale(64)


class FourierTable(BaseModel):
    """
    Coefficients A(0..N) de φ(τ) = -Σ(n+½)A(n)q^{n+½}.

    Les entrées non entières sont conservées sous forme de Fraction et
    décrites dans violations (une conjecture n'est jamais supposée).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    A: List[Any] = Field(..., json_schema_extra={"example": [1, -44, 1126]})
    N: int
    violations: List[Dict[str, Any]] = []

    @field_validator("N")
    def n_ok(cls, v):
        if v < 1:
            raise ValueError(f"Troncature invalide: {v} (minimum 1)")
        return v

    @property
    def integral(self) -> bool:
        return not self.violations

    def sign_pattern_violations(self) -> List[int]:
        """Indices 1 <= n <= N où (-1)ⁿA(n) n'est pas strictement positif."""
        return [n for n in range(1, self.N + 1) if (-1) ** n * self.A[n] <= 0]


def phi_qexp(order: int) -> FourierTable:
    """
    Table A(0..N) calculée en arithmétique entière exacte.

    R = (ψ-1)/(ψ+1), P = (η₁η₂)⁴/q^{1/2}; alors A(n) = -[P·R]_n/(2n+1).

    Example:
        >>> phi_qexp(3).A
        [1, -44, 1126, -27096]
    """
    if order < 1:
        raise DomainError(f"phi_qexp demande un ordre >= 1 (reçu {order})")

    logger.info(f"Calcul de la table de Fourier A(n) jusqu'à n={order}")
    weight = ExactSeries(EtaQuotient(PHI_WEIGHT_FACTORS).qexp(order).coeffs)
    psi = psi_qexp(order).integral_prefactor().truncate(order)
    ratio = series_mul(psi - 1, series_reciprocal(psi + 1))
    product = series_mul(weight, ratio)

    values, violations = [], []
    for n, c in enumerate(product.coeffs):
        divisor = 2 * n + 1
        if c % divisor:
            values.append(Fraction(-c, divisor))
            violations.append({
                "n": n,
                "numerator": str(-c),
                "divisor": divisor,
                "remainder": (-c) % divisor,
            })
            logger.warning(f"⚠ A({n}) non entier: reste {(-c) % divisor} modulo {divisor}")
        else:
            values.append(-c // divisor)

    logger.info(f"✓ Table A(n) construite: {len(values)} coefficients, {len(violations)} violations")
    return FourierTable(A=values, N=order, violations=violations)


# ---- Valeurs ponctuelles ----

def _check_tau(tau, ctx: PrecisionContext) -> mpc:
    tau = mpc(tau)
    if tau.imag <= 0:
        raise DomainError(f"τ doit être dans le demi-plan supérieur (Im τ = {mp.nstr(tau.imag, 10)})")
    return tau


def _eta_series(t: mpc, eps: mpf) -> mpc:
    """η(t) = e^{2πit/24}·Σ (-1)^k q^{k(3k∓1)/2}, q = e^{2πit}."""
    q = mp.exp(2j * mp.pi * t)
    aq = abs(q)
    total = mpc(1)
    k = 1
    while True:
        e_minus, e_plus = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
        if aq ** e_minus < eps:
            break
        sign = -1 if k % 2 else 1
        total += sign * (q ** e_minus + q ** e_plus)
        k += 1
    return mp.exp(2j * mp.pi * t / 24) * total


def eta_eval(level: int, tau, ctx: PrecisionContext = None) -> mpc:
    """
    η_m(τ) = η(mτ) par la série pentagonale.

    Tant que |q| > ETA_DIRECT_MAX_Q, t = mτ est ramené vers le domaine
    fondamental: η(t+k) = e^{πik/12}η(t) et η(-1/t) = √(-it)·η(t).

    Raises:
        DomainError: si Im τ <= 0
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        tau = _check_tau(tau, ctx)
        eps = mpf(10) ** (-ctx.working_digits)
        limit = mpf(ETA_DIRECT_MAX_Q)
        t = level * tau
        factor = mpc(1)
        steps = 0
        while abs(mp.exp(2j * mp.pi * t)) > limit:
            k = mp.nint(t.real)
            t -= k
            factor *= mp.exp(1j * mp.pi * k / 12)
            if abs(t) < 1:
                factor /= mp.sqrt(-1j * t)
                t = -1 / t
            steps += 1
        if steps:
            logger.debug(f"η({mp.nstr(level * tau, 10)}) réduit en {steps} étapes vers t = {mp.nstr(t, 10)}")
        result = factor * _eta_series(t, eps)
    return ctx.round(result)


def psi_eval(tau, ctx: PrecisionContext = None) -> mpc:
    """ψ(τ) = 64(η₂(τ)/η₁(τ))²⁴."""
    ctx = resolve_context(ctx)
    with ctx.workdps():
        inner = ctx.inner()
        result = 64 * (eta_eval(2, tau, inner) / eta_eval(1, tau, inner)) ** 24
    return ctx.round(result)


def phi_eval(tau, ctx: PrecisionContext = None) -> mpc:
    """
    φ(τ) = ½(η₁η₂)⁴·(64η₂²⁴ - η₁²⁴)/(64η₂²⁴ + η₁²⁴).

    Raises:
        PoleError: si |64η₂²⁴ + η₁²⁴| < 10^{-digits/2}·(|64η₂²⁴| + |η₁²⁴|)
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        inner = ctx.inner()
        e1 = eta_eval(1, tau, inner)
        e2 = eta_eval(2, tau, inner)
        top = 64 * e2 ** 24
        bottom = e1 ** 24
        den = top + bottom
        if abs(den) < mpf(10) ** (-ctx.digits / 2) * (abs(top) + abs(bottom)):
            raise PoleError(f"φ évaluée au voisinage d'un pôle (τ = {mp.nstr(mpc(tau), 15)})")
        result = (e1 * e2) ** 4 * (top - bottom) / (2 * den)
    return ctx.round(result)


def phi_from_table(tau, table: FourierTable, ctx: PrecisionContext = None) -> mpc:
    """Somme tronquée -Σ(n+½)A(n)q^{n+½} avec q^{1/2} = e^{πiτ}."""
    ctx = resolve_context(ctx)
    with ctx.workdps():
        tau = _check_tau(tau, ctx)
        half = mp.exp(1j * mp.pi * tau)
        q = half * half
        total = mpc(0)
        power = half
        for n, a in enumerate(table.A):
            total -= (n + mpf(0.5)) * to_big_real(Fraction(a), ctx.inner()) * power
            power *= q
    return ctx.round(total)


class Lemma2Report(BaseModel):
    """Résidus relatifs des identités φ(τ+1) = -φ(τ) = φ(-1/(2τ))/(4τ⁴)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    tau: mpc
    translation_residual: mpf
    fricke_residual: mpf
    tolerance: mpf

    @property
    def passed(self) -> bool:
        return self.translation_residual < self.tolerance and self.fricke_residual < self.tolerance


def verify_lemma2(tau, ctx: PrecisionContext = None) -> Lemma2Report:
    """Contrôle numérique de la translation et de l'involution de Fricke."""
    ctx = resolve_context(ctx)
    with ctx.workdps():
        tau = _check_tau(tau, ctx)
        base = phi_eval(tau, ctx)
        shifted = phi_eval(tau + 1, ctx)
        fricke = phi_eval(-1 / (2 * tau), ctx)
        scale = max(abs(base), mpf(10) ** (-ctx.digits))
        translation = abs(shifted + base) / scale
        fricke_res = abs(shifted - fricke / (4 * tau ** 4)) / scale
        tolerance = ctx.tolerance(10)
    return Lemma2Report(
        tau=tau, translation_residual=translation, fricke_residual=fricke_res, tolerance=tolerance
    )


# ---- Valeurs exactes dans ℚ[√2] ----

class CMRecord(BaseModel):
    """Valeurs exactes ψ_k = ψ(2^{(k-1)/2}i), f_k et R(f_k)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k: int
    psi_k: sp.Expr
    f_k: sp.Expr
    R_k: sp.Expr

    @field_validator("k")
    def k_ok(cls, v):
        if not -3 <= v <= 3:
            raise ValueError(f"Indice CM hors de [-3, 3]: {v}")
        return v

    @property
    def tau(self):
        return sp.I * sp.Integer(2) ** sp.Rational(self.k - 1, 2)


def exact_zero(expr) -> bool:
    """Test exact de nullité dans ℚ[√2] (rationalisation puis développement)."""
    return sp.expand(sp.radsimp(sp.sympify(expr))) == 0


def r_from_psi(psi):
    return sp.radsimp((psi - 1) / (psi + 1))


def cm_table() -> List[CMRecord]:
    """Les sept valeurs ψ_k positives dans ℚ[√2], k ∈ [-3, 3]."""
    f0 = sp.sqrt(2) - 1
    psi = {0: sp.Integer(1), 1: sp.Rational(1, 8), 2: sp.expand(f0 ** 3 / 8)}
    psi[3] = sp.expand(sp.sqrt(8) * psi[2] ** 2)
    for k in (1, 2, 3):
        psi[-k] = sp.radsimp(1 / psi[k])

    records = []
    for k in range(-3, 4):
        p = psi[k]
        f = sp.radsimp((sp.sqrt(1 + p) - 1) / sp.sqrt(p))
        records.append(CMRecord(k=k, psi_k=p, f_k=f, R_k=r_from_psi(p)))
    return records


def expected_cm_r_values() -> Dict[int, sp.Expr]:
    """R(f₁), R(f₂), R(f₃) sous forme fermée en f₀ = √2 - 1."""
    f0 = sp.sqrt(2) - 1
    return {
        1: sp.Rational(-7, 9),
        2: -(80 * f0 + 15) / 49,
        3: -(352 * f0 + 295) / 441,
    }


def j_invariant(psi):
    """
    j = 64(1+4ψ)³/ψ, exact pour ψ rationnel (Fraction) ou algébrique (sympy).

    Raises:
        PoleError: si ψ = 0
    """
    if psi == 0:
        raise PoleError("L'invariant j présente un pôle en ψ = 0")
    if isinstance(psi, sp.Basic):
        return sp.radsimp(sp.expand(64 * (1 + 4 * psi) ** 3) / psi)
    if isinstance(psi, int):
        psi = Fraction(psi)
    return 64 * (1 + 4 * psi) ** 3 / psi


def j_factorisations() -> Dict[str, bool]:
    """Les trois factorisations de j(τ) - j(τ_CM), identités polynomiales en ψ."""
    p = sp.Symbol("psi")
    j = 64 * (1 + 4 * p) ** 3 / p
    identities = {
        "j - 12³": (j - 12 ** 3, 64 * (1 + p) * (1 - 8 * p) ** 2 / p),
        "j - 20³": (j - 20 ** 3, 64 * (1 - p) * (1 - 112 * p - 64 * p ** 2) / p),
        "j - 66³": (j - 66 ** 3, 8 * (8 - p) * (1 - 4480 * p - 512 * p ** 2) / p),
    }
    return {name: sp.cancel(lhs - rhs) == 0 for name, (lhs, rhs) in identities.items()}


def r_symmetries() -> Dict[str, bool]:
    """R(f) = R(-f) = R(1/f) = -R((1-f)/(1+f)) et R = (ψ-1)/(ψ+1)."""
    f = sp.Symbol("f")

    def R(x):
        return 2 * (2 * x / (1 + x ** 2)) ** 2 - 1

    psi = (2 * f / (1 - f ** 2)) ** 2
    return {
        "R(f) = R(-f)": sp.cancel(R(f) - R(-f)) == 0,
        "R(f) = R(1/f)": sp.cancel(R(f) - R(1 / f)) == 0,
        "R(f) = -R((1-f)/(1+f))": sp.cancel(R(f) + R((1 - f) / (1 + f))) == 0,
        "R = (ψ-1)/(ψ+1)": sp.cancel(R(f) - (psi - 1) / (psi + 1)) == 0,
    }


def cm_phi_values(ctx: PrecisionContext = None) -> Dict[str, mpf]:
    """
    Valeurs de φ aux points CM: résidus absolus entre valeur ponctuelle,
    forme fermée (Γ(1/4), Γ(1/8)/Γ(5/8)) et image par Fricke.
    """
    ctx = resolve_context(ctx)
    inner = ctx.inner()
    r = {k: sp.N(v, inner.working_digits) for k, v in expected_cm_r_values().items()}
    with ctx.workdps():
        s2 = mp.sqrt(2)
        f0 = s2 - 1
        g4 = gamma_quarter(inner) ** 8
        ratio8 = (gamma_rational(Fraction(1, 8), inner) / gamma_rational(Fraction(5, 8), inner)) ** 4
        pi6 = mp.pi ** 6

        phi_i = phi_eval(1j, inner)
        phi_2i = phi_eval(2j, inner)
        phi_r2i = phi_eval(1j * s2, inner)
        closed_i = mpf(str(r[1])) * g4 / (mpf(2) ** mpf(10.5) * pi6)
        closed_2i = f0 * mpf(str(r[3])) * g4 / (mpf(2) ** (mpf(55) / 4) * pi6)
        closed_r2i = f0 ** mpf(2.5) * mpf(str(r[2])) * ratio8 / (mpf(2) ** mpf(10.5) * mp.pi ** 2)

        residuals = {
            "φ(i) forme fermée": abs(phi_i - closed_i),
            "φ(i) = -¼φ(i/2)": abs(phi_i + phi_eval(0.5j, inner) / 4),
            "φ(2i) forme fermée": abs(phi_2i - closed_2i),
            "φ(2i) = -φ(i/4)/64": abs(phi_2i + phi_eval(0.25j, inner) / 64),
            "φ(i/√2) = 0": abs(phi_eval(1j / s2, inner)),
            "φ(√2i) forme fermée": abs(phi_r2i - closed_r2i),
            "φ(√2i) = -φ(i/(2√2))/16": abs(phi_r2i + phi_eval(1j / (2 * s2), inner) / 16),
        }
    return residuals


def special_psi_values(ctx: PrecisionContext = None) -> Dict[str, mpf]:
    """ψ((1+i)/2) = -1 et ψ((1+√2i)/3) = -((√2+1)/2)³, avec j = 12³ et 20³."""
    ctx = resolve_context(ctx)
    with ctx.workdps():
        inner = ctx.inner()
        s2 = mp.sqrt(2)
        p1 = psi_eval((1 + 1j) / 2, inner)
        p2 = psi_eval((1 + 1j * s2) / 3, inner)
        expected2 = -((s2 + 1) / 2) ** 3
        return {
            "ψ((1+i)/2) = -1": abs(p1 + 1),
            "ψ((1+√2i)/3)": abs(p2 - expected2),
            "j((1+i)/2) = 12³": abs(j_invariant(p1) - 12 ** 3) / 12 ** 3,
            "j((1+√2i)/3) = 20³": abs(j_invariant(p2) - 20 ** 3) / 20 ** 3,
        }


def triple_sum_eval(q, table: FourierTable, ctx: PrecisionContext = None) -> mpf:
    """
    π²/8 - Σ A(n)q^{n+½}/(n+½)².

    Égale agm(1+f,1-f)²·I₂(f)/(1+f) au module f de nome q.

    Raises:
        DomainError: si q n'est pas dans [0, 1[
        TruncationError: si la table est trop courte pour la tolérance
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        q = to_big_real(q, ctx.inner())
        if not 0 <= q < 1:
            raise DomainError(f"triple_sum_eval attend 0 <= q < 1 (reçu {q})")
        if q == 0:
            return ctx.round(mp.pi ** 2 / 8)

        # |A(n)| ≈ ½e^{(n+½)π}: reste géométrique de raison e^π·q
        growth = mp.exp(mp.pi) * q
        n_next = mpf(table.N) + mpf(1.5)
        if growth >= 1:
            raise TruncationError(f"Série divergente: e^π·q = {mp.nstr(growth, 6)} >= 1")
        tail = growth ** n_next / (2 * n_next ** 2 * (1 - growth))
        if tail > ctx.tolerance():
            raise TruncationError(
                f"Table de {table.N + 1} coefficients insuffisante: reste estimé {mp.nstr(tail, 5)}"
            )

        half = mp.sqrt(q)
        total = mpf(0)
        power = half
        for n, a in enumerate(table.A):
            total += to_big_real(Fraction(a), ctx.inner()) * power / (n + mpf(0.5)) ** 2
            power *= q
        result = mp.pi ** 2 / 8 - total
    return ctx.round(result)


def triple_sum_reference(f, ctx: PrecisionContext = None) -> mpf:
    """agm(1+f,1-f)²·I₂(f)/(1+f), membre de droite de triple_sum_eval."""
    from src.integral import i2_eval

    ctx = resolve_context(ctx)
    with ctx.workdps():
        f = to_big_real(f, ctx.inner())
        g = agm(1 + f, 1 - f, ctx.inner())
        result = g * g * i2_eval(f, ctx.inner()) / (1 + f)
    return ctx.round(result)
