"""
Module des certificats hypergéométriques de l'équation en h.

Y(h) = Σ S₀(n)hⁿ, S₀(n) = Σ_m A(n;m), A(n;m) = Σ_k a(n;m,k) avec

    a(n;m,k) = (½)_m(½)_{n-m}(½)_k² / (n!·(m+½)_{k+1}·(n-m+½)_{k+1})

Les identités sur les termes sont vérifiées en rationnels exacts; les
sommes infinies en k sont évaluées avec une borne de reste explicite.

Fonctionnalités:
    - Certificat télescopique terme à terme (exact)
    - A(n;m) avec borne de reste certifiée (ou reste d'Euler-Maclaurin)
    - Récurrences (R3), (S-) et (IR), récurrence de T(n) et sa série génératrice
    - Validation de bout en bout de Y(h): quadrature, somme triple, série

Utilisation:
    from src.certificates import telescoping_grid

    report = telescoping_grid(12, 12)
    print(report.passed)
"""

import logging
import math
import random
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from mpmath import mp, mpf
from pydantic import BaseModel, ConfigDict, Field, field_validator
from tqdm import tqdm

from src.config import Config
from src.errors import DomainError
from src.integral import h_of_f, t_coeffs, y_coeffs, y_eval, y_from_i2
from src.precision import PrecisionContext, resolve_context, to_big_real
from src.series import (
    ExactSeries,
    PiQuadratic,
    coefficient_value,
    pochhammer,
    series_mul,
    series_reciprocal,
    series_sqrt,
)

# Configuration du logger pour ce module
logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)

# Méthodes d'évaluation d'une somme en k
SUM_METHODS = ("certified", "euler-maclaurin", "empty")

# Nombre maximal de corrections de Bernoulli dans le reste d'Euler-Maclaurin
EM_MAX_ORDER = 15


@lru_cache(maxsize=None)
def _poch(alpha: Fraction, k: int) -> Fraction:
    return pochhammer(alpha, k)


def _check_nm(n: int, m: int):
    if n < 0 or not 0 <= m <= n:
        raise DomainError(f"Indices hors domaine: n = {n}, m = {m} (0 <= m <= n requis)")


# ---- Termes exacts ----

def a_term(n: int, m: int, k: int) -> Fraction:
    """
    Terme a(n;m,k), rationnel strictement positif.

    Example:
        >>> a_term(0, 0, 0)
        Fraction(4, 1)
    """
    _check_nm(n, m)
    if k < 0:
        raise DomainError(f"Indice k négatif: {k}")
    num = _poch(HALF, m) * _poch(HALF, n - m) * _poch(HALF, k) ** 2
    den = math.factorial(n) * _poch(m + HALF, k + 1) * _poch(n - m + HALF, k + 1)
    return num / den


def a_tilde(n: int, m: int, k: int) -> Fraction:
    """ã(n;m,k) = (m+k+½)·a(n;m,k)."""
    return (m + k + HALF) * a_term(n, m, k)


def c_term(n: int, m: int) -> Fraction:
    """c(n;m) = (½)_m(½)_{n-m}/n!, de somme T(n) sur m = 1..n."""
    return _poch(HALF, m) * _poch(HALF, n - m) / math.factorial(n)


def telescoping_certificate(n: int, m: int, k: int) -> bool:
    """
    Vérifie exactement

        (n-m+1)²a(n+1;m,k) - (n-m+½)²a(n;m,k) = ((n-m+½)²/(n+1))·(ã(n;m,k+1) - ã(n;m,k))

    Raises:
        DomainError: si m ∉ [0, n] ou k < 0
    """
    _check_nm(n, m)
    lhs = (n - m + 1) ** 2 * a_term(n + 1, m, k) - (n - m + HALF) ** 2 * a_term(n, m, k)
    rhs = (n - m + HALF) ** 2 / (n + 1) * (a_tilde(n, m, k + 1) - a_tilde(n, m, k))
    return lhs == rhs


class CertificateReport(BaseModel):
    """
    Rapport d'un certificat sur une grille de paramètres.

    Les échecs sont des dictionnaires {params, error} comme les
    enregistrements d'erreurs du pipeline; worst_residual et bound ne sont
    renseignés que pour les contrôles numériques.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    identity: str = Field(..., json_schema_extra={"example": "telescoping"})
    grid: str = Field(..., json_schema_extra={"example": "n <= 12, k <= 12"})
    checked: int = 0
    failures: List[dict] = []
    worst_residual: Optional[mpf] = None
    bound: Optional[mpf] = None

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.failures


def telescoping_grid(n_max: int, k_max: int, show_progress: bool = False) -> CertificateReport:
    """Certificat télescopique pour tous les (n, m, k) avec n <= n_max, k <= k_max."""
    report = CertificateReport(identity="telescoping", grid=f"n <= {n_max}, k <= {k_max}")
    for n in tqdm(range(n_max + 1), desc="Télescopage", disable=Config.PRODUCTION_MODE or not show_progress):
        for m in range(n + 1):
            for k in range(k_max + 1):
                report.checked += 1
                if not telescoping_certificate(n, m, k):
                    report.failures.append({"params": [n, m, k], "error": "identité non vérifiée"})
    return report


def telescoping_random(count: int, bound: int = 50, seed: int = None) -> CertificateReport:
    """Certificat télescopique en count points (n, m, k) tirés avec n, k <= bound."""
    rng = random.Random(Config.RANDOM_SEED if seed is None else seed)
    report = CertificateReport(identity="telescoping", grid=f"{count} tirages, n, k <= {bound}")
    for _ in range(count):
        n = rng.randint(0, bound)
        m = rng.randint(0, n)
        k = rng.randint(0, bound)
        report.checked += 1
        if not telescoping_certificate(n, m, k):
            report.failures.append({"params": [n, m, k], "error": "identité non vérifiée"})
    return report


# ---- Sommes en k ----

class KSum(BaseModel):
    """
    A(n;m) = Σ_k a(n;m,k), les terms premiers termes sommés directement.

    Pour "certified", |A(n;m) - value| <= tail_bound par la borne sur le
    rapport des termes. Pour "euler-maclaurin", le reste est l'intégrale
    corrigée et tail_bound majore le reste de la formule plus l'erreur de
    quadrature.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    m: int
    value: mpf
    terms: int
    tail_bound: mpf
    method: str = "certified"

    @field_validator("method")
    def method_ok(cls, v):
        if v not in SUM_METHODS:
            raise ValueError(f"Méthode de sommation inconnue: {v}")
        return v


def _term_mpf(n: int, m: int, k) -> mpf:
    """a(n;m,k) en flottant, pour k réel (utilisé par le reste intégral)."""
    a0 = a_term(n, m, 0)
    head = mpf(a0.numerator) / a0.denominator
    return head * mp.rf(mpf(1) / 2, k) ** 2 / (mp.rf(m + mpf(3) / 2, k) * mp.rf(n - m + mpf(3) / 2, k))


def _head_sum(n: int, m: int, terms: int) -> Tuple[mpf, mpf]:
    """Σ_{k<terms} a(n;m,k) par le rapport des termes; retourne (somme, a(n;m,terms))."""
    a0 = a_term(n, m, 0)
    total, term = mpf(0), mpf(a0.numerator) / a0.denominator
    half, shift_m, shift_n = mpf(1) / 2, m + mpf(3) / 2, n - m + mpf(3) / 2
    for k in range(terms):
        total += term
        term = term * (k + half) ** 2 / ((shift_m + k) * (shift_n + k))
    return total, term


def _euler_maclaurin_tail(n: int, m: int, start: int, tol: mpf) -> Tuple[mpf, mpf]:
    """
    Σ_{k>=start} a(n;m,k) = ∫_start^∞ a + a(start)/2 - Σ_j B_{2j}/(2j)!·a^{(2j-1)}(start) + R.

    k ↦ a(n;m,k) est complètement monotone (produit de quotients Γ(k+½)/Γ(k+c),
    c > ½), donc |R| est majoré par le dernier terme retenu.
    """
    f = lambda k: _term_mpf(n, m, k)
    integral, quad_error = mp.quad(f, [start, mp.inf], error=True)
    derivatives = list(mp.diffs(f, start, 2 * EM_MAX_ORDER - 1))

    tail = integral + derivatives[0] / 2
    last = derivatives[0]
    for j in range(1, EM_MAX_ORDER + 1):
        correction = mp.bernoulli(2 * j) / mp.factorial(2 * j) * derivatives[2 * j - 1]
        if abs(correction) > abs(last):
            break
        tail -= correction
        last = correction
        if abs(last) < tol:
            break
    return tail, abs(last) + abs(quad_error)


def A_nm(n: int, m: int, tolerance=None, ctx: PrecisionContext = None, max_terms: int = None) -> KSum:
    """
    Somme A(n;m) avec borne de reste.

    Le rapport des termes vérifie a(k+1)/a(k) <= (k+½)/(k+n+5/2), d'où

        Σ_{k>=K} a(n;m,k) <= a(n;m,K)·(K+n+3/2)/(n+1)

    K croît jusqu'à ce que cette borne passe sous la tolérance. Si plus de
    max_terms termes seraient nécessaires (n petit, décroissance lente en
    k^{-n-2}), les working_digits + 20 premiers termes sont sommés et le
    reste est évalué par Euler-Maclaurin (méthode "euler-maclaurin").

    Args:
        tolerance: borne visée (par défaut 10^{-digits})
        max_terms (int, optional): par défaut Config.CERT_MAX_TERMS

    Returns:
        KSum: A(n;m) = 0 (méthode "empty") si m < 0 ou m > n
    """
    if n < 0:
        raise DomainError(f"Indice n négatif: {n}")
    ctx = resolve_context(ctx)
    max_terms = max_terms or Config.CERT_MAX_TERMS
    if m < 0 or m > n:
        return KSum(n=n, m=m, value=mpf(0), terms=0, tail_bound=mpf(0), method="empty")

    with ctx.workdps():
        tol = to_big_real(tolerance, ctx.inner()) if tolerance is not None else ctx.tolerance()
        eps = mpf(10) ** (-ctx.working_digits)
        a0 = a_term(n, m, 0)
        head = mpf(a0.numerator) / a0.denominator

        # Estimation grossière de K: reste ≈ a(0)·K^{-(n+1)}/(n+1)
        estimate = (head / (tol * (n + 1))) ** (mpf(1) / (n + 1))
        if estimate > max_terms:
            start = ctx.working_digits + 20
            total, _ = _head_sum(n, m, start)
            tail, bound = _euler_maclaurin_tail(n, m, start, tol)
            bound += start * eps * total
            if bound >= tol:
                logger.warning(f"⚠ A({n};{m}): borne d'Euler-Maclaurin {mp.nstr(bound, 5)} > tolérance")
            logger.debug(f"A({n};{m}) par Euler-Maclaurin (K estimé {mp.nstr(estimate, 5)} > {max_terms})")
            return KSum(n=n, m=m, value=total + tail, terms=start, tail_bound=bound, method="euler-maclaurin")

        total, term, k = mpf(0), head, 0
        half, shift_m, shift_n = mpf(1) / 2, m + mpf(3) / 2, n - m + mpf(3) / 2
        while True:
            total += term
            term = term * (k + half) ** 2 / ((shift_m + k) * (shift_n + k))
            k += 1
            bound = term * (k + n + mpf(3) / 2) / (n + 1) + k * eps * total
            if bound < tol or k >= max_terms:
                break
    if bound >= tol:
        logger.warning(f"⚠ A({n};{m}): borne {mp.nstr(bound, 5)} > tolérance après {k} termes")
    return KSum(n=n, m=m, value=total, terms=k, tail_bound=bound, method="certified")


class _KSumCache:
    """Cache local des A(n;m) d'une même vérification (symétrie m ↔ n-m incluse)."""

    def __init__(self, tolerance, ctx: PrecisionContext):
        self.tolerance = tolerance
        self.ctx = ctx
        self.values: Dict[Tuple[int, int], KSum] = {}

    def get(self, n: int, m: int) -> KSum:
        key = (n, min(m, n - m)) if 0 <= m <= n else (n, m)
        if key not in self.values:
            self.values[key] = A_nm(key[0], key[1], self.tolerance, self.ctx)
        return self.values[key]


# ---- (R3) et combinaisons décalées ----

def r3_rhs(n: int, m: int) -> Fraction:
    """Membre de droite exact -(½)_{n+1-m}(½)_m/(n+1)!."""
    return -_poch(HALF, n + 1 - m) * _poch(HALF, m) / math.factorial(n + 1)


class R3Report(BaseModel):
    """m²A(n+1;m) - (m-½)²A(n;m-1) comparé au membre de droite exact."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    m: int
    lhs: mpf
    rhs: Fraction
    residual: mpf
    bound: mpf

    @property
    def passed(self) -> bool:
        return self.residual <= self.bound


def verify_R3(n: int, m: int, ctx: PrecisionContext = None, cache: _KSumCache = None) -> R3Report:
    """
    Vérifie (R3) en (n, m), 1 <= m <= n+1.

    La borne combine les restes des deux sommes et une marge d'arrondi.
    """
    if n < 0 or not 1 <= m <= n + 1:
        raise DomainError(f"(R3) demande 1 <= m <= n+1 (reçu n = {n}, m = {m})")
    ctx = resolve_context(ctx)
    cache = cache or _KSumCache(None, ctx)
    with ctx.workdps():
        upper = cache.get(n + 1, m)
        lower = cache.get(n, m - 1)
        weight = (m - mpf(1) / 2) ** 2
        lhs = m * m * upper.value - weight * lower.value
        rhs = r3_rhs(n, m)
        residual = abs(lhs - coefficient_value(rhs, ctx.inner()))
        bound = m * m * upper.tail_bound + weight * lower.tail_bound + ctx.tolerance()
    return R3Report(n=n, m=m, lhs=lhs, rhs=rhs, residual=residual, bound=bound)


def r3_grid(n_max: int, ctx: PrecisionContext = None, show_progress: bool = False) -> CertificateReport:
    """(R3) pour tous les n <= n_max et 1 <= m <= n+1, plus la convention A(n;n+1) = 0."""
    ctx = resolve_context(ctx)
    cache = _KSumCache(None, ctx)
    report = CertificateReport(identity="R3", grid=f"n <= {n_max}, 1 <= m <= n+1")
    worst, bound = mpf(0), mpf(0)
    for n in tqdm(range(n_max + 1), desc="(R3)", disable=Config.PRODUCTION_MODE or not show_progress):
        boundary = A_nm(n, n + 1, ctx=ctx)
        if boundary.value != 0:
            report.failures.append({"params": [n, n + 1], "error": "A(n;n+1) non nul"})
        for m in range(1, n + 2):
            check = verify_R3(n, m, ctx, cache)
            report.checked += 1
            if check.residual > worst:
                worst, bound = check.residual, check.bound
            if not check.passed:
                report.failures.append({
                    "params": [n, m],
                    "error": f"résidu {mp.nstr(check.residual, 5)} > borne {mp.nstr(check.bound, 5)}",
                })
    report.worst_residual, report.bound = worst, bound
    return report


def shifted_combination_check(n_max: int, ctx: PrecisionContext = None) -> CertificateReport:
    """
    (n+1)·(R3)(n, m) - (n-m+½)·(R3)(n-1, m) a un membre de droite nul.

    Vérifie l'annulation exacte des membres de droite, puis la nullité
    numérique de la combinaison des quatre sommes A pour 1 <= m <= n.
    """
    ctx = resolve_context(ctx)
    cache = _KSumCache(None, ctx)
    report = CertificateReport(identity="R3 combinée", grid=f"1 <= m <= n <= {n_max}")
    worst = mpf(0)
    with ctx.workdps():
        for n in range(1, n_max + 1):
            for m in range(1, n + 1):
                report.checked += 1
                exact = (n + 1) * r3_rhs(n, m) - (n - m + HALF) * r3_rhs(n - 1, m)
                if exact != 0:
                    report.failures.append({"params": [n, m], "error": f"membre de droite {exact} non nul"})
                    continue
                shift = n - m + mpf(1) / 2
                parts = [
                    ((n + 1) * m * m, cache.get(n + 1, m)),
                    (-m * m * shift, cache.get(n, m)),
                    (-(n + 1) * (m - mpf(1) / 2) ** 2, cache.get(n, m - 1)),
                    ((m - mpf(1) / 2) ** 2 * shift, cache.get(n - 1, m - 1)),
                ]
                value = mp.fsum(w * s.value for w, s in parts)
                bound = mp.fsum(abs(w) * s.tail_bound for w, s in parts) + ctx.tolerance()
                worst = max(worst, abs(value))
                if abs(value) > bound:
                    report.failures.append({"params": [n, m], "error": f"combinaison {mp.nstr(value, 5)}"})
    report.worst_residual = worst
    return report


# ---- Sommes de moments et S₂ ----

def s2_coeffs(n_max: int) -> List[PiQuadratic]:
    """S₂(0..N) par (S-): S₂(n+1) = S₂(n) + ¼(2n+1)S₀(n) - T(n+1), S₂(0) = 0."""
    s0, t = y_coeffs(n_max), t_coeffs(n_max)
    out = [PiQuadratic(0)]
    for n in range(n_max):
        out.append(out[n] + Fraction(2 * n + 1, 4) * s0[n] - t[n + 1])
    return out


class MomentSums(BaseModel):
    """S_j(n) = Σ_m m^j·A(n;m) pour j = 0..3, avec borne de reste commune."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    S: List[mpf]
    bound: mpf


def moment_sums(n: int, ctx: PrecisionContext = None, cache: _KSumCache = None) -> MomentSums:
    ctx = resolve_context(ctx)
    cache = cache or _KSumCache(None, ctx)
    with ctx.workdps():
        sums = [mpf(0)] * 4
        bound = mpf(0)
        for m in range(n + 1):
            ks = cache.get(n, m)
            for j in range(4):
                sums[j] += m ** j * ks.value
            bound += max(1, m) ** 3 * ks.tail_bound
    return MomentSums(n=n, S=sums, bound=bound + ctx.tolerance())


def verify_moment_sums(n_max: int = 10, ctx: PrecisionContext = None) -> CertificateReport:
    """
    Pour n <= n_max: S₁ = n·S₀/2, S₃ = 3n·S₂/2 - n³·S₀/4, S₀ égale la
    table exacte de y_coeffs et S₂ la reconstruction par (S-).
    """
    ctx = resolve_context(ctx)
    cache = _KSumCache(None, ctx)
    exact_s0, exact_s2 = y_coeffs(n_max), s2_coeffs(n_max)
    report = CertificateReport(identity="moments", grid=f"n <= {n_max}")
    worst = mpf(0)
    with ctx.workdps():
        for n in range(n_max + 1):
            sums = moment_sums(n, ctx, cache)
            s0, s1, s2, s3 = sums.S
            scale = (n + 1) ** 3
            residuals = {
                "S1 = n·S0/2": abs(s1 - n * s0 / 2),
                "S3 = 3n·S2/2 - n³·S0/4": abs(s3 - (3 * n * s2 / 2 - mpf(n) ** 3 * s0 / 4)),
                "S0 = y_coeffs": abs(s0 - coefficient_value(exact_s0[n], ctx.inner())),
                "S2 = (S-)": abs(s2 - coefficient_value(exact_s2[n], ctx.inner())),
            }
            for name, value in residuals.items():
                report.checked += 1
                worst = max(worst, value)
                if value > scale * sums.bound:
                    report.failures.append({"params": [n], "error": f"{name}: résidu {mp.nstr(value, 5)}"})
    report.worst_residual = worst
    return report


# ---- (IR) et T(n) ----

class IRReport(BaseModel):
    """Résidus exacts de (IR) sous ses deux formes de membre de droite."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    residual: PiQuadratic
    simplified_residual: PiQuadratic
    pi_part_homogeneous: bool

    @property
    def passed(self) -> bool:
        return not self.residual and not self.simplified_residual and self.pi_part_homogeneous


def _ir_lhs(s0: List[PiQuadratic], n: int) -> PiQuadratic:
    return (
        Fraction((n + 1) ** 3, 4) * s0[n + 1]
        - Fraction((2 * n + 1) * (2 * n * n + 2 * n + 1), 8) * s0[n]
        + Fraction(n ** 3, 4) * s0[n - 1]
    )


def verify_IR(n: int, s0: List[PiQuadratic] = None, t: List[Fraction] = None) -> IRReport:
    """
    Vérifie exactement, en arithmétique r + s·π²,

        ¼(n+1)³S₀(n+1) - ⅛(2n+1)(2n²+2n+1)S₀(n) + ¼n³S₀(n-1)
            = -(n+2)T(n+2) + ½(n+2)T(n+1) + ½nT(n) + (½)_{n+1}/(2(n+1)!)
            = ½nT(n) - (½)_{n+1}/(2·n!)

    Les parties en π² doivent vérifier seules la récurrence homogène.
    """
    if n < 1:
        raise DomainError(f"(IR) demande n >= 1 (reçu {n})")
    s0 = s0 if s0 is not None and len(s0) > n + 1 else y_coeffs(n + 1)
    t = t if t is not None and len(t) > n + 2 else t_coeffs(n + 2)
    lhs = _ir_lhs(s0, n)
    rhs = (
        -(n + 2) * t[n + 2]
        + Fraction(n + 2, 2) * t[n + 1]
        + Fraction(n, 2) * t[n]
        + _poch(HALF, n + 1) / (2 * math.factorial(n + 1))
    )
    simplified = Fraction(n, 2) * t[n] - _poch(HALF, n + 1) / (2 * math.factorial(n))
    return IRReport(
        n=n,
        residual=lhs - rhs,
        simplified_residual=lhs - simplified,
        pi_part_homogeneous=lhs.s == 0,
    )


def ir_grid(n_max: int) -> CertificateReport:
    """(IR) pour 1 <= n <= n_max."""
    s0, t = y_coeffs(n_max + 1), t_coeffs(n_max + 2)
    report = CertificateReport(identity="IR", grid=f"1 <= n <= {n_max}")
    for n in range(1, n_max + 1):
        check = verify_IR(n, s0, t)
        report.checked += 1
        if not check.passed:
            report.failures.append({
                "params": [n],
                "error": f"résidu {check.residual}, forme simplifiée {check.simplified_residual}",
            })
    return report


def verify_s2_relation(n_max: int) -> CertificateReport:
    """
    Relation intermédiaire sans S₃:
    -½S₂(n) - ¼n³S₀(n) + ¼n³S₀(n-1) = (n+1)T(n+1) + ½nT(n) - (½)_{n+1}/n!
    """
    s0, s2, t = y_coeffs(n_max), s2_coeffs(n_max), t_coeffs(n_max + 1)
    report = CertificateReport(identity="S2", grid=f"n <= {n_max}")
    for n in range(n_max + 1):
        prev = s0[n - 1] if n >= 1 else PiQuadratic(0)
        lhs = -s2[n] / 2 - Fraction(n ** 3, 4) * s0[n] + Fraction(n ** 3, 4) * prev
        rhs = (n + 1) * t[n + 1] + Fraction(n, 2) * t[n] - _poch(HALF, n + 1) / math.factorial(n)
        report.checked += 1
        if lhs != rhs:
            report.failures.append({"params": [n], "error": f"résidu {lhs - rhs}"})
    return report


def t_generating_series(order: int) -> ExactSeries:
    """Série de h/((2-h)√(1-h)) jusqu'à l'ordre donné."""
    one_minus_h = ExactSeries.from_polynomial([1, -1], order)
    two_minus_h = ExactSeries.from_polynomial([2, -1], order)
    inverse = series_mul(series_reciprocal(two_minus_h), series_reciprocal(series_sqrt(one_minus_h)))
    return inverse.mul_x(1).truncate(order)


def verify_T_recursion(n_max: int, gf_order: int = 40) -> CertificateReport:
    """
    T(n) par somme directe des c(n;m) et par 2T(n+1) - T(n) = (½)_n/n!,
    puis coefficients de la série génératrice jusqu'à gf_order.
    """
    report = CertificateReport(identity="T", grid=f"n <= {n_max}, série jusqu'à {gf_order}")
    recursive = t_coeffs(max(n_max, gf_order))
    for n in range(n_max + 1):
        direct = sum((c_term(n, m) for m in range(1, n + 1)), Fraction(0))
        report.checked += 1
        if direct != recursive[n]:
            report.failures.append({"params": [n], "error": f"somme directe {direct} ≠ {recursive[n]}"})
    gf = t_generating_series(gf_order)
    for n in range(gf_order + 1):
        report.checked += 1
        if gf[n] != recursive[n]:
            report.failures.append({"params": [n], "error": f"série génératrice {gf[n]} ≠ {recursive[n]}"})
    return report


def verify_pochhammer_identities(n_max: int = 20) -> CertificateReport:
    """
    (α)_{k+1} = (α)_k(α+k), c(n;m) = (-1)^m(½-m)_n/n! et
    2c(n+1;m) - c(n;m) = c(n+1;m) - c(n+1;m+1), pour n <= n_max.
    """
    report = CertificateReport(identity="pochhammer", grid=f"n <= {n_max}")
    for n in range(n_max + 1):
        for m in range(n + 1):
            alpha = m + HALF
            report.checked += 1
            if _poch(alpha, n + 1) != _poch(alpha, n) * (alpha + n):
                report.failures.append({"params": [n, m], "error": "(α)_{k+1} ≠ (α)_k(α+k)"})
            report.checked += 1
            if c_term(n, m) != (-1) ** m * pochhammer(HALF - m, n) / math.factorial(n):
                report.failures.append({"params": [n, m], "error": "forme alternée de c(n;m)"})
            report.checked += 1
            following = c_term(n + 1, m + 1)
            if 2 * c_term(n + 1, m) - c_term(n, m) != c_term(n + 1, m) - following:
                report.failures.append({"params": [n, m], "error": "relation de contiguïté de c"})
    return report


# ---- Validation de bout en bout de Y(h) ----

class EndToEndReport(BaseModel):
    """Y(h) par la quadrature en angles, la somme triple et la série Σ S₀(n)hⁿ."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    h: mpf
    quadrature: mpf
    triple_sum: mpf
    triple_sum_bound: mpf
    series: mpf
    max_delta: mpf
    tolerance: mpf

    @property
    def passed(self) -> bool:
        return self.max_delta < self.tolerance


def y_quadrature(h, ctx: PrecisionContext = None) -> mpf:
    """
    Y(h) par quadrature tanh-sinh, après u = sin²a, v = sin²b et a = b·t:

        Y(h) = 4∫_0^{π/2}∫_0^1 b dt db / √((1-h·sin²(bt))(1-h·cos²b))

    La précision est plafonnée par Config.ORACLE_MAX_DIGITS.
    """
    ctx = resolve_context(ctx)
    digits = min(ctx.digits, Config.ORACLE_MAX_DIGITS)
    with mp.workdps(digits + 10):
        h = to_big_real(h, ctx.inner())

        def integrand(b, t):
            return b / mp.sqrt((1 - h * mp.sin(b * t) ** 2) * (1 - h * mp.cos(b) ** 2))

        value = 4 * mp.quad(integrand, [0, mp.pi / 2], [0, 1])
    return value


def y_triple_sum(h, ctx: PrecisionContext = None, show_progress: bool = False):
    """
    Y(h) = Σ_n hⁿ Σ_m A(n;m), chaque A(n;m) avec sa borne de reste.

    Returns:
        tuple: (valeur, borne d'erreur cumulée)
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        h = to_big_real(h, ctx.inner())
        if not 0 <= h < 1:
            raise DomainError(f"La somme triple demande 0 <= h < 1 (reçu {h})")
        tol = ctx.tolerance()
        if h == 0:
            ks = A_nm(0, 0, tol / 10, ctx)
            return ks.value, ks.tail_bound

        n_max = int(math.ceil(ctx.working_digits * math.log(10) / -math.log(float(h)))) + 10
        cache = _KSumCache(tol / (10 * (n_max + 1)), ctx)
        total, bound, power = mpf(0), mpf(0), mpf(1)
        for n in tqdm(range(n_max + 1), desc="Somme triple", disable=Config.PRODUCTION_MODE or not show_progress):
            s0 = mpf(0)
            for m in range(n + 1):
                ks = cache.get(n, m)
                s0 += ks.value
                bound += power * ks.tail_bound
            total += power * s0
            power *= h
        # S₀(n) décroît en n: majoration du reste par une série géométrique
        bound += power * s0 / (1 - h)
    return total, bound


def verify_eq1_end_to_end(h, ctx: PrecisionContext = None, show_progress: bool = False) -> EndToEndReport:
    """
    Accord des trois évaluations de Y(h) à 10^{-digits} près.

    Raises:
        DomainError: si h ∉ [0, 1)
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        h = to_big_real(h, ctx.inner())
        if not 0 <= h < 1:
            raise DomainError(f"Y(h) n'est validée que pour 0 <= h < 1 (reçu {h})")
        quadrature = y_quadrature(h, ctx)
        triple, triple_bound = y_triple_sum(h, ctx, show_progress)
        series, _ = y_eval(h, ctx)
        delta = max(abs(quadrature - triple), abs(quadrature - series), abs(triple - series))
        tolerance = mpf(10) ** (2 - min(ctx.digits, Config.ORACLE_MAX_DIGITS)) + triple_bound
    logger.info(f"Y({mp.nstr(h, 10)}): écart maximal {mp.nstr(delta, 5)}")
    return EndToEndReport(
        h=h,
        quadrature=quadrature,
        triple_sum=triple,
        triple_sum_bound=triple_bound,
        series=series,
        max_delta=delta,
        tolerance=tolerance,
    )


def y_normalisation_delta(f, ctx: PrecisionContext = None) -> mpf:
    """|Y(h(f)) - κ(1+f)I₂(f)|, Y(h) étant sommée par la série."""
    ctx = resolve_context(ctx)
    with ctx.workdps():
        _, from_i2 = y_from_i2(f, ctx)
        series, _ = y_eval(h_of_f(f, ctx.inner()), ctx)
        return abs(series - from_i2)
