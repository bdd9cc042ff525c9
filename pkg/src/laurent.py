"""
Module du développement de Laurent de φ(τ) au pôle double τ₊ = (1+i)/2.

φ(τ) = -i/(8π²(τ-τ₊)²(τ-τ₋)²)·(1 - 2Σ c_n(-4D·z⁴)ⁿ), z = (τ-τ₊)/(τ-τ₋)

Le système de Ramanujan (q d/dq sur L, M, N) est résolu en séries entières
en z à partir des valeurs de L, M, N en q₀ = -e^{-π}; les c_n sont ensuite
reconstruits comme rationnels puis confirmés à précision doublée.

Fonctionnalités:
    - Polynômes en L, M, N (sympy) et dérivation de Ramanujan
    - Séries d'Eisenstein exactes par sommes de diviseurs
    - Valeurs en q₀ (formes fermées et sommation directe)
    - Extraction des c_n, propriétés arithmétiques, asymptotique, règle de somme

Utilisation:
    from src.laurent import phi_laurent

    result = phi_laurent(8)
    print(result.c[0])   # 7/15
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List

import sympy as sp
from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict

from src.errors import (
    ConsistencyError,
    DomainError,
    InsufficientOrderError,
    PrecisionInsufficientError,
)
from src.precision import (
    PrecisionContext,
    agm,
    gamma_quarter,
    mpf_to_fraction,
    resolve_context,
)
from src.series import ExactSeries, series_exp, series_mul, series_reciprocal, theta_apply

# Configuration du logger pour ce module
logger = logging.getLogger(__name__)

L_SYM, M_SYM, N_SYM = sp.symbols("L M N")
WEIGHTS = {L_SYM: 2, M_SYM: 4, N_SYM: 6}

# q d/dq L = (L²-M)/12, q d/dq M = (LM-N)/3, q d/dq N = (LN-M²)/2
RAMANUJAN_RULES = {
    L_SYM: (L_SYM ** 2 - M_SYM) / 12,
    M_SYM: (L_SYM * M_SYM - N_SYM) / 3,
    N_SYM: (L_SYM * N_SYM - M_SYM ** 2) / 2,
}

EISENSTEIN_WEIGHTS = {"L": (1, -24), "M": (3, 240), "N": (5, -504)}

# Chiffres de marge pour la reconstruction rationnelle
_RECONSTRUCTION_MARGIN = 10


@dataclass(frozen=True)
class EisensteinPoly:
    """
    Polynôme à coefficients rationnels en L, M, N (poids 2, 4, 6).

    Example:
        >>> ramanujan_derive(EisensteinPoly.from_expr(L_SYM)).weight
        4
    """

    poly: sp.Poly

    @classmethod
    def from_expr(cls, expr) -> "EisensteinPoly":
        return cls(sp.Poly(expr, L_SYM, M_SYM, N_SYM, domain="QQ"))

    @property
    def weights(self) -> set:
        return {2 * a + 4 * b + 6 * c for a, b, c in self.poly.monoms()}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.weights) <= 1

    @property
    def weight(self) -> int:
        if not self.is_homogeneous:
            raise ValueError(f"Polynôme non homogène: poids {sorted(self.weights)}")
        return next(iter(self.weights), 0)

    def is_zero(self) -> bool:
        return self.poly.is_zero

    def evaluate(self, L, M, N):
        """Évaluation numérique (mpf ou mpc)."""
        total = 0
        for (a, b, c), coeff in self.poly.terms():
            coeff = Fraction(int(coeff.p), int(coeff.q))
            total += (mpf(coeff.numerator) / coeff.denominator) * L ** a * M ** b * N ** c
        return total

    def evaluate_series(self, L: ExactSeries, M: ExactSeries, N: ExactSeries) -> ExactSeries:
        """Substitution de trois séries exactes."""
        order = min(L.order, M.order, N.order)
        total = ExactSeries.constant(0, order)
        for (a, b, c), coeff in self.poly.terms():
            term = ExactSeries.constant(Fraction(int(coeff.p), int(coeff.q)), order)
            for base, e in ((L, a), (M, b), (N, c)):
                for _ in range(e):
                    term = series_mul(term, base)
            total = total + term
        return total


def ramanujan_derive(p: EisensteinPoly) -> EisensteinPoly:
    """q d/dq par la règle de Leibniz; le poids augmente de 2."""
    expr = sum(
        (sp.diff(p.poly.as_expr(), x) * rule for x, rule in RAMANUJAN_RULES.items()),
        sp.Integer(0),
    )
    return EisensteinPoly.from_expr(sp.expand(expr))


def log_eta_derivative_polys(order: int) -> List[EisensteinPoly]:
    """P_k avec (q d/dq)^{k+1} log η = P_k(L, M, N), k = 0..order-1."""
    polys = [EisensteinPoly.from_expr(L_SYM / 24)]
    while len(polys) < order:
        polys.append(ramanujan_derive(polys[-1]))
    return polys


def eisenstein_qexp(which: str, order: int) -> ExactSeries:
    """
    L = 1 - 24Σσ₁(n)qⁿ, M = 1 + 240Σσ₃(n)qⁿ, N = 1 - 504Σσ₅(n)qⁿ.

    Raises:
        DomainError: si which ∉ {L, M, N} ou order < 1
    """
    if which not in EISENSTEIN_WEIGHTS:
        raise DomainError(f"Série d'Eisenstein inconnue: {which}")
    if order < 1:
        raise DomainError(f"Ordre invalide: {order}")
    power, scale = EISENSTEIN_WEIGHTS[which]
    sigma = [0] * (order + 1)
    for d in range(1, order + 1):
        dk = d ** power
        for multiple in range(d, order + 1, d):
            sigma[multiple] += dk
    return ExactSeries([1] + [scale * s for s in sigma[1:]])


def eisenstein_sum(which: str, q, ctx: PrecisionContext = None) -> mpf:
    """Sommation directe 1 + c·Σ n^k qⁿ/(1-qⁿ) pour |q| < 1."""
    ctx = resolve_context(ctx)
    power, scale = EISENSTEIN_WEIGHTS[which]
    with ctx.workdps():
        q = mp.mpmathify(q)
        eps = mpf(10) ** (-ctx.working_digits)
        total = mpf(0)
        n = 1
        qn = q
        while abs(qn) * n ** power > eps:
            total += n ** power * qn / (1 - qn)
            n += 1
            qn *= q
        result = 1 + scale * total
    return ctx.round(result)


def eisenstein_closed_forms(ctx: PrecisionContext = None) -> Dict[int, Dict[str, mpf]]:
    """
    Valeurs en q₀ = -e^{-π} (niveau 1) et q₀² (niveau 2):
    L = 6/π et 3/π, M = -3Γ(1/4)⁸/(16π⁶) et 3Γ(1/4)⁸/(64π⁶), N = 0.
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        g8 = gamma_quarter(ctx.inner()) ** 8
        pi6 = mp.pi ** 6
        return {
            1: {"L": 6 / mp.pi, "M": -3 * g8 / (16 * pi6), "N": mpf(0)},
            2: {"L": 3 / mp.pi, "M": 3 * g8 / (64 * pi6), "N": mpf(0)},
        }


class EisensteinCheck(BaseModel):
    """Formes fermées en q₀ comparées à la sommation directe."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    closed: Dict[int, Dict[str, mpf]]
    summed: Dict[int, Dict[str, mpf]]
    max_residual: mpf


def eisenstein_at_q0(ctx: PrecisionContext = None) -> EisensteinCheck:
    ctx = resolve_context(ctx)
    closed = eisenstein_closed_forms(ctx)
    with ctx.workdps():
        q0 = -mp.exp(-mp.pi)
        summed = {
            level: {w: eisenstein_sum(w, q0 ** level, ctx.inner()) for w in ("L", "M", "N")}
            for level in (1, 2)
        }
        worst = max(abs(closed[lv][w] - summed[lv][w]) for lv in (1, 2) for w in ("L", "M", "N"))
    return EisensteinCheck(closed=closed, summed=summed, max_residual=worst)


# ---- Résolution du système de Ramanujan en séries ----

def _solve_ramanujan(level: int, order: int, variable: str, ctx: PrecisionContext) -> Dict[str, list]:
    """
    Développe L, M, N et λ = log η_level - log η_level(τ₊) autour de τ₊.

    variable "tau": d/dτ = 2πiν·q d/dq (coefficients en τ - τ₊, complexes);
    variable "z": τ - τ₊ = iz/(1-z), d/dz = i/(1-z)²·d/dτ (coefficients réels).
    ν = level provient de q → q^level.
    """
    init = eisenstein_closed_forms(ctx)[level]
    if variable == "z":
        weight = [-2 * mp.pi * level * (k + 1) for k in range(order + 1)]
    elif variable == "tau":
        weight = [2j * mp.pi * level] + [0] * order
    else:
        raise DomainError(f"Variable de développement inconnue: {variable}")

    L, M, N, lam = [init["L"]], [init["M"]], [init["N"]], [mpf(0)]
    xs = {"L": [], "M": [], "N": [], "lam": []}

    def cauchy(a, b, k):
        return mp.fsum(a[i] * b[k - i] for i in range(k + 1))

    for k in range(order):
        LL, LM, LN, MM = cauchy(L, L, k), cauchy(L, M, k), cauchy(L, N, k), cauchy(M, M, k)
        xs["L"].append((LL - M[k]) / 12)
        xs["M"].append((LM - N[k]) / 3)
        xs["N"].append((LN - MM) / 2)
        xs["lam"].append(L[k] / 24)
        for key, target in (("L", L), ("M", M), ("N", N), ("lam", lam)):
            x = xs[key]
            target.append(mp.fsum(weight[k - j] * x[j] for j in range(k + 1)) / (k + 1))

    return {"L": L, "M": M, "N": N, "log_eta": lam}


def taylor_from_derivatives(level: int, order: int, ctx: PrecisionContext = None) -> List[mpc]:
    """
    Coefficients de Taylor en τ - τ₊ de log η_level par dérivations itérées:
    coefficient k = (2πiν)^k·P_{k-1}(L, M, N)/k!.
    """
    ctx = resolve_context(ctx)
    polys = log_eta_derivative_polys(order)
    with ctx.workdps():
        init = eisenstein_closed_forms(ctx.inner())[level]
        factor = 2j * mp.pi * level
        coeffs = [mpc(0)]
        for k in range(1, order + 1):
            value = polys[k - 1].evaluate(init["L"], init["M"], init["N"])
            coeffs.append(factor ** k * value / math.factorial(k))
    return coeffs


def taylor_from_series(level: int, order: int, ctx: PrecisionContext = None) -> List[mpc]:
    """Mêmes coefficients obtenus par la résolution en séries (variable τ)."""
    ctx = resolve_context(ctx)
    with ctx.workdps():
        return _solve_ramanujan(level, order, "tau", ctx.inner())["log_eta"]


# ---- Extraction des c_n ----

class LaurentResult(BaseModel):
    """
    Coefficients c_1..c_n du développement de Laurent et contrôles associés.

    Attributes:
        D: (π²M(q₀)/24)²
        c: rationnels c_n (Fraction)
        achieved_order: ordre de Taylor atteint en z
        digits: précision de l'extraction
        checks: résidus des contrôles internes (structure, G₀, D, ψ(τ₊))
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    D: mpf
    c: List[Fraction]
    achieved_order: int
    digits: int
    checks: Dict[str, mpf] = {}


def _laurent_numeric(n_max: int, digits: int):
    """c_n numériques (mpf), D et résidus de structure à la précision donnée."""
    ctx = PrecisionContext(digits=digits, guard=20)
    order = 4 * n_max + 4
    with ctx.workdps():
        inner = ctx.inner()
        one = _solve_ramanujan(1, order, "z", inner)
        two = _solve_ramanujan(2, order, "z", inner)
        m0 = eisenstein_closed_forms(inner)[1]["M"]

        lam1 = ExactSeries(one["log_eta"])
        lam2 = ExactSeries(two["log_eta"])
        exp_s = series_exp((lam1 + lam2).scale(4))
        psi = -series_exp((lam2 - lam1).scale(24))

        # ψ + 1 a un zéro double en z = 0
        psi_plus = psi + 1
        scale = abs(psi_plus[2])
        structure = max(abs(psi_plus[0]), abs(psi_plus[1])) / scale
        q_series = ExactSeries(psi_plus.coeffs[2:])

        one_minus_z4 = ExactSeries.from_polynomial([1, -4, 6, -4, 1], q_series.order)
        numerator = series_mul(exp_s, psi - 1).scale(mp.pi ** 2 * m0 / 6)
        g = series_mul(numerator, series_reciprocal(series_mul(q_series, one_minus_z4)))

        D = (mp.pi ** 2 * m0 / 24) ** 2
        c_values = [-g[4 * n] / (2 * (-4 * D) ** n) for n in range(1, n_max + 1)]
        off_structure = max(
            (abs(g[j]) / (4 * abs(D)) ** (j / mpf(4)) for j in range(1, 4 * n_max + 1) if j % 4),
            default=mpf(0),
        )
        checks = {
            "double_zero": structure,
            "G0 - 1": abs(g[0] - 1),
            "coefficients hors z^{4n}": off_structure,
            "D - π⁴/(4agm(1,√2)⁸)": abs(D - mp.pi ** 4 / (4 * agm(1, mp.sqrt(2), inner) ** 8)),
        }
    return c_values, D, checks, order


def _reconstruct(x: mpf, digits: int) -> Fraction:
    """Plus petit rationnel compatible avec x à 10^{-(digits - marge)} près."""
    effective = digits - _RECONSTRUCTION_MARGIN
    with mp.workdps(digits + 20):
        max_den = 10 ** (effective // 2 - 5)
        candidate = mpf_to_fraction(x).limit_denominator(max_den)
        error = abs(x - mpf(candidate.numerator) / candidate.denominator)
        if error > abs(x) * mpf(10) ** (-effective):
            raise PrecisionInsufficientError(
                f"Aucun rationnel de dénominateur <= 10^{effective // 2 - 5} à {mp.nstr(error, 5)} près"
            )
    return candidate


def phi_laurent(n_max: int, ctx: PrecisionContext = None) -> LaurentResult:
    """
    Extrait c_1..c_{n_max} par reconstruction rationnelle, confirmée à
    précision doublée.

    La précision utilisée est au moins 40 + 10·n_max chiffres; l'ordre de
    Taylor en z est 4·n_max + 4.

    Raises:
        InsufficientOrderError: si n_max < 1
        PrecisionInsufficientError: si la reconstruction échoue ou change
            à précision doublée
        ConsistencyError: si les contrôles de structure échouent
    """
    if n_max < 1:
        raise InsufficientOrderError(f"phi_laurent demande n_max >= 1 (reçu {n_max})")
    ctx = resolve_context(ctx)
    digits = max(ctx.digits, 40 + 10 * n_max)

    logger.info(f"Développement de Laurent: n_max={n_max}, {digits} chiffres")
    values, D, checks, order = _laurent_numeric(n_max, digits)
    tolerance = mpf(10) ** (-digits // 2)
    for name, residual in checks.items():
        if residual > tolerance:
            raise ConsistencyError(f"Contrôle '{name}' en échec: résidu {mp.nstr(residual, 5)}")

    coeffs = [_reconstruct(v, digits) for v in values]

    # Confirmation à précision doublée
    confirm, _, _, _ = _laurent_numeric(n_max, 2 * digits)
    for n, (c, v) in enumerate(zip(coeffs, confirm), start=1):
        if _reconstruct(v, 2 * digits) != c:
            raise PrecisionInsufficientError(f"c_{n} instable entre {digits} et {2 * digits} chiffres")
    logger.info(f"✓ {len(coeffs)} coefficients c_n reconstruits et confirmés")

    with mp.workdps(digits):
        D = +D
    return LaurentResult(D=D, c=coeffs, achieved_order=order, digits=digits, checks=checks)


def laurent_initial_values(ctx: PrecisionContext = None) -> Dict[str, mpf]:
    """
    Valeurs initiales (η₁η₂)⁴ = -(i/24)M(q₀) et ψ(τ₊) = -1 comparées aux
    valeurs ponctuelles des êta.
    """
    from src.modular import eta_eval, psi_eval

    ctx = resolve_context(ctx)
    with ctx.workdps():
        inner = ctx.inner()
        tau_plus = mpc(0.5, 0.5)
        m0 = eisenstein_closed_forms(inner)[1]["M"]
        product = (eta_eval(1, tau_plus, inner) * eta_eval(2, tau_plus, inner)) ** 4
        return {
            "(η₁η₂)⁴ + (i/24)M(q₀)": abs(product + 1j * m0 / 24),
            "ψ(τ₊) + 1": abs(psi_eval(tau_plus, inner) + 1),
        }


# ---- Propriétés des c_n ----

class CnPropertyRow(BaseModel):
    n: int
    c: str
    odd_ratio: bool
    small_primes: bool
    squarefree_factorial: bool

    @property
    def ok(self) -> bool:
        return self.odd_ratio and self.small_primes and self.squarefree_factorial


def cn_properties(result: LaurentResult, n_max: int = None) -> List[CnPropertyRow]:
    """
    (a) c_n > 0, rapport de deux entiers impairs;
    (b) aucun premier > 4n+1 ne divise le dénominateur;
    (c) le dénominateur de (4n+5)!·c_n est sans facteur carré, avec des
        premiers p < n, p ≡ 1 mod 4.
    """
    n_max = min(n_max or len(result.c), len(result.c))
    rows = []
    for n in range(1, n_max + 1):
        c = result.c[n - 1]
        odd_ratio = c > 0 and c.numerator % 2 == 1 and c.denominator % 2 == 1

        primes = sp.factorint(c.denominator, limit=4 * n + 2)
        small = all(p <= 4 * n + 1 for p in primes)

        scaled = (math.factorial(4 * n + 5) * c).denominator
        factors = sp.factorint(scaled, limit=max(n, 2))
        squarefree = all(e == 1 and p < n and p % 4 == 1 for p, e in factors.items())

        row = CnPropertyRow(n=n, c=str(c), odd_ratio=odd_ratio, small_primes=small, squarefree_factorial=squarefree)
        if not row.ok:
            logger.warning(f"⚠ c_{n} = {c}: propriétés (a, b, c) = ({odd_ratio}, {small}, {squarefree})")
        rows.append(row)
    return rows


class AsymptoticRow(BaseModel):
    n: int
    ratio_error: float
    envelope: float
    within_envelope: bool


def cn_asymptotic_check(result: LaurentResult) -> List[AsymptoticRow]:
    """
    c_n·Dⁿ/(8n-6) → 1 avec une erreur en O((5/8)^{2n}).

    Raises:
        InsufficientOrderError: si moins de 10 coefficients sont disponibles
    """
    if len(result.c) < 10:
        raise InsufficientOrderError(f"cn_asymptotic_check demande n_max >= 10 (reçu {len(result.c)})")
    rows = []
    with mp.workdps(result.digits):
        for n, c in enumerate(result.c, start=1):
            ratio = mpf(c.numerator) / c.denominator * result.D ** n / (8 * n - 6)
            error = float(ratio - 1)
            envelope = 10 * (5 / 8) ** (2 * n)
            rows.append(AsymptoticRow(n=n, ratio_error=error, envelope=envelope, within_envelope=abs(error) < envelope))
    return rows


class SumRuleReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    n_exact: int
    lhs: mpf
    deviation: mpf


def sum_rule_check(result: LaurentResult, target_digits: int = 40, n_exact: int = None) -> SumRuleReport:
    """
    2Σ c_n·Dⁿ·(2-√2)^{4n} = 1, termes exacts jusqu'à n_exact puis c_nDⁿ ≈ 8n-6.
    """
    n_exact = min(n_exact or len(result.c), len(result.c))
    with mp.workdps(max(target_digits, result.digits) + 10):
        t = (2 - mp.sqrt(2)) ** 4
        exact = mp.fsum(
            mpf(c.numerator) / c.denominator * result.D ** n * t ** n
            for n, c in enumerate(result.c[:n_exact], start=1)
        )
        eps = mpf(10) ** (-(target_digits + 10))
        tail = mpf(0)
        n = n_exact + 1
        while True:
            term = (8 * n - 6) * t ** n
            tail += term
            if term < eps:
                break
            n += 1
        lhs = 2 * (exact + tail)
        deviation = abs(lhs - 1)
    return SumRuleReport(n_exact=n_exact, lhs=lhs, deviation=deviation)


def first_term_approximation(result: LaurentResult) -> mpf:
    """2·c₁·D·(2-√2)⁴, première approximation de la règle de somme."""
    with mp.workdps(result.digits):
        c1 = result.c[0]
        return 2 * mpf(c1.numerator) / c1.denominator * result.D * (2 - mp.sqrt(2)) ** 4


def derivative_series_check(order: int, k_max: int = 6) -> Dict[int, bool]:
    """
    (q d/dq)^k log η₁ comparé à P_{k-1}(L, M, N) substitué en séries exactes.
    """
    L = eisenstein_qexp("L", order)
    M = eisenstein_qexp("M", order)
    N = eisenstein_qexp("N", order)
    base = L.scale(Fraction(1, 24))
    polys = log_eta_derivative_polys(k_max)
    results = {}
    for k in range(1, k_max + 1):
        lhs = theta_apply(base, k - 1)
        rhs = polys[k - 1].evaluate_series(L, M, N)
        results[k] = lhs.equals_through(rhs, order)
    return results
