"""
Module du modèle asymptotique des coefficients A(n).

2(-1)ⁿA(n) ≈ Σ_{m∈𝐒} C(m,n)·E((2n+1)π/(2m)), E(x) = ((x-1)/x)·eˣ

Fonctionnalités:
    - Suite 𝐒 des entiers dont tous les facteurs premiers sont ≡ 1 mod 4
    - Décompositions m = γ² + δ² en carrés premiers entre eux
    - Localisation des singularités (w+i)/(2m) dans l'orbite de (1+i)/2 sous Γ₀(2)
    - r(m), coefficients C(m,n) et identité cosinus (produit → somme)
    - Analyse des résidus et ajustement par moindres carrés (numpy)

Utilisation:
    from src.asymptotics import r_of_m

    r_of_m(65)   # 7
"""

import logging
import math
from collections import Counter
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Tuple

import numpy as np
import sympy as sp
from mpmath import mp, mpf
from pydantic import BaseModel, ConfigDict, model_validator
from tqdm import tqdm

from src.config import Config
from src.errors import ConstructionError, DomainError, InsufficientOrderError
from src.modular import FourierTable
from src.precision import PrecisionContext, resolve_context, to_big_real

# Configuration du logger pour ce module
logger = logging.getLogger(__name__)


def E(x, ctx: PrecisionContext = None) -> mpf:
    """
    E(x) = ((x-1)/x)·eˣ.

    Raises:
        DomainError: si x <= 0
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        x = to_big_real(x, ctx.inner())
        if x <= 0:
            raise DomainError(f"E(x) n'est définie que pour x > 0 (reçu {x})")
        result = (x - 1) / x * mp.exp(x)
    return ctx.round(result)


# ---- Suite 𝐒 et décompositions ----

def s_sequence(limit: int) -> List[int]:
    """
    1 et les entiers <= limit divisibles seulement par des premiers ≡ 1 mod 4.

    Example:
        >>> s_sequence(30)
        [1, 5, 13, 17, 25, 29]
    """
    if limit < 1:
        raise DomainError(f"Borne invalide pour la suite 𝐒: {limit}")
    keep = [True] * (limit + 1)
    for p in sp.primerange(2, limit + 1):
        if p % 4 != 1:
            keep[p::p] = [False] * len(range(p, limit + 1, p))
    return [n for n in range(1, limit + 1) if keep[n]]


@lru_cache(maxsize=None)
def in_s_sequence(m: int) -> bool:
    if m < 1:
        return False
    return all(p % 4 == 1 for p in sp.factorint(m))


@lru_cache(maxsize=None)
def prime_power_factors(m: int) -> Tuple[int, ...]:
    """Les puissances q_k = p_k^{e_k} de la factorisation de m (ordre croissant de p)."""
    return tuple(p ** e for p, e in sorted(sp.factorint(m).items()))


def _check_s_member(m: int):
    if m <= 1 or not in_s_sequence(m):
        raise DomainError(f"{m} n'appartient pas à 𝐒 (ou vaut 1)")


def coprime_square_decompositions(m: int) -> List[Tuple[int, int]]:
    """
    Les 2^{ω-1} couples (γ, δ), γ impair > 0, δ > 0, pgcd = 1, γ² + δ² = m.

    Raises:
        DomainError: si m ∉ 𝐒 ou m <= 1
    """
    _check_s_member(m)
    pairs = []
    for gamma in range(1, math.isqrt(m) + 1, 2):
        rest = m - gamma * gamma
        delta = math.isqrt(rest)
        if delta > 0 and delta * delta == rest and math.gcd(gamma, delta) == 1:
            pairs.append((gamma, delta))

    expected = 2 ** (len(sp.factorint(m)) - 1)
    if len(pairs) != expected:
        logger.warning(f"⚠ m={m}: {len(pairs)} décompositions trouvées, {expected} attendues")
    return pairs


# ---- Singularités ----

class SingularityDatum(BaseModel):
    """
    Singularité de φ en τ = (w+i)/(2m), image de (1+i)/2 par M(a,b,c,d) ∈ Γ₀(2).

    Example:
        >>> locate_singularity(1, 2)
        SingularityDatum(m=5, gamma=1, delta=2, a=1, b=0, c=2, d=1, w=3, r=1)
    """

    model_config = ConfigDict(frozen=True)

    m: int
    gamma: int
    delta: int
    a: int
    b: int
    c: int
    d: int
    w: int
    r: int

    @model_validator(mode="after")
    def datum_ok(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"Matrice de déterminant {self.a * self.d - self.b * self.c} (attendu 1)")
        if self.c % 2:
            raise ValueError(f"c = {self.c} impair: matrice hors de Γ₀(2)")
        if self.m != (self.c // 2) ** 2 + (self.c // 2 + self.d) ** 2:
            raise ValueError(f"m = {self.m} incompatible avec c = {self.c}, d = {self.d}")
        if self.w != (self.a + self.b) * (self.c + self.d) + self.b * self.d:
            raise ValueError(f"w = {self.w} incompatible avec la matrice")
        if not (0 < self.w < self.m and self.w % 2 == 1):
            raise ValueError(f"w = {self.w} doit être impair dans ]0, {self.m}[")
        if 2 * self.r != self.m - self.w:
            raise ValueError(f"r = {self.r} différent de (m - w)/2")
        if self.gamma % 2 == 0 or math.gcd(self.gamma, self.delta) != 1:
            raise ValueError(f"(γ, δ) = ({self.gamma}, {self.delta}): γ impair et pgcd 1 requis")
        return self

    @property
    def matrix(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def maps_base_point(self) -> bool:
        """Vérifie exactement M((1+i)/2) = (w+i)/(2m) en entiers de Gauss."""
        den_re, den_im = self.c + 2 * self.d, self.c
        lhs_re = self.w * den_re - den_im
        lhs_im = self.w * den_im + den_re
        return lhs_re == 2 * self.m * (self.a + 2 * self.b) and lhs_im == 2 * self.m * self.a


def locate_singularity(gamma: int, delta: int) -> Optional[SingularityDatum]:
    """
    c = 2γ, d = δ - γ, a impair dans ]0, c[ avec c | (ad-1), b = (ad-1)/c,
    w = (a+b)(c+d) + bd.

    Returns:
        SingularityDatum si 0 < w < m et w impair, sinon None

    Raises:
        ConstructionError: si γ n'est pas impair positif ou si pgcd(d, c) ≠ 1
    """
    if gamma <= 0 or gamma % 2 == 0:
        raise ConstructionError(f"γ doit être impair et positif (reçu {gamma})")
    c = 2 * gamma
    d = delta - gamma
    if math.gcd(d, c) != 1:
        raise ConstructionError(f"Pas d'inverse de d = {d} modulo c = {c}")
    a = pow(d, -1, c)
    b = (a * d - 1) // c
    w = (a + b) * (c + d) + b * d
    m = gamma * gamma + delta * delta
    if not (0 < w < m and w % 2 == 1):
        return None
    return SingularityDatum(m=m, gamma=gamma, delta=delta, a=a, b=b, c=c, d=d, w=w, r=(m - w) // 2)


class SingularityReport(BaseModel):
    """Singularités trouvées pour un m, avec les anomalies de signe."""

    m: int
    data: List[SingularityDatum]
    violations: List[str] = []

    @property
    def r_values(self) -> List[int]:
        return [datum.r for datum in self.data]


def singularities_for(m: int) -> SingularityReport:
    """
    Applique locate_singularity aux deux signes de δ pour chaque décomposition.

    Un seul signe doit convenir; toute autre situation est rapportée comme
    violation, sans exception.
    """
    data, violations = [], []
    for gamma, delta in coprime_square_decompositions(m):
        found = [datum for datum in (locate_singularity(gamma, s * delta) for s in (1, -1)) if datum]
        if len(found) != 1:
            violations.append(f"(γ, |δ|) = ({gamma}, {delta}): {len(found)} signes valides")
        data.extend(found)
    return SingularityReport(m=m, data=data, violations=violations)


# ---- r(m) et C(m,n) ----

def _reduced(t: int, m: int) -> int:
    """Représentant de ±t modulo m dans [0, m/2]."""
    t %= m
    return min(t, m - t)


def _sign_sums(m: int) -> List[int]:
    """s_ε = Σ ε_k·m/q_k pour ε₁ = +1 (2^{ω-1} combinaisons)."""
    quotients = [m // q for q in prime_power_factors(m)]
    sums = []
    for signs in product((1, -1), repeat=len(quotients) - 1):
        sums.append(quotients[0] + sum(s * x for s, x in zip(signs, quotients[1:])))
    return sums


def _cosine_multiset(r: int, m: int) -> Counter:
    """Fréquences du développement produit → somme de μ·∏cos(x·r·π/q_k)."""
    return Counter(_reduced(r * s, m) for s in _sign_sums(m))


def r_of_m(m: int, report: SingularityReport = None) -> Optional[int]:
    """
    Plus petit r < m/2 dont le produit de cosinus reproduit les singularités.

    ω = 1: r = (m - w)/2 directement. ω > 1: les candidats sont filtrés par
    leurs résidus ±r_j·(m/q_k)⁻¹ modulo chaque q_k puis comparés exactement.

    Returns:
        int, ou None si aucun r ne convient (violation rapportée par l'appelant)
    """
    report = report or singularities_for(m)
    if not report.data:
        return None
    factors = prime_power_factors(m)
    if len(factors) == 1:
        return report.data[0].r

    target = Counter(_reduced(r, m) for r in report.r_values)
    allowed = []
    for q in factors:
        inv = pow(m // q, -1, q)
        allowed.append({(s * rj * inv) % q for rj in report.r_values for s in (1, -1)})

    for r in range(1, (m + 1) // 2):
        if all(r % q in allowed_q for q, allowed_q in zip(factors, allowed)):
            if _cosine_multiset(r, m) == target:
                return r
    return None


class AsymptoticModel(BaseModel):
    """Table m → r(m) pour m ∈ 𝐒 ∩ [1, M_max]."""

    M_max: int
    terms: Dict[int, int]
    singularities: Dict[int, List[SingularityDatum]] = {}
    violations: List[dict] = []

    def r(self, m: int) -> int:
        if m not in self.terms:
            raise DomainError(f"r({m}) absent du modèle (M_max = {self.M_max})")
        return self.terms[m]


def build_model(m_max: int, show_progress: bool = True) -> AsymptoticModel:
    """Calcule r(m) pour tous les m ∈ 𝐒 ∩ ]1, M_max]; les échecs sont collectés."""
    terms, singularities, violations = {1: 0}, {}, []
    members = [m for m in s_sequence(m_max) if m > 1]
    for m in tqdm(members, desc="r(m)", disable=Config.PRODUCTION_MODE or not show_progress):
        try:
            report = singularities_for(m)
            singularities[m] = report.data
            for message in report.violations:
                violations.append({"m": m, "error": message, "error_type": "SignViolation"})
            r = r_of_m(m, report)
            if r is None:
                violations.append({"m": m, "error": "aucun r(m) < m/2", "error_type": "MissingR"})
                logger.warning(f"⚠ m={m}: aucun r(m) ne reproduit les singularités")
            else:
                terms[m] = r
        except Exception as e:
            violations.append({"m": m, "error": str(e), "error_type": type(e).__name__})
            logger.warning(f"⚠ m={m}: {e}")
    logger.info(f"Modèle asymptotique: {len(terms) - 1} termes, {len(violations)} violations")
    return AsymptoticModel(M_max=m_max, terms=terms, singularities=singularities, violations=violations)


def C_coeff(m: int, n: int, model: AsymptoticModel = None, ctx: PrecisionContext = None) -> mpf:
    """
    C(1,n) = 1; C(m,n) = 2^ω·∏cos((2n+1-m)·r(m)·π/q_k) pour m ∈ 𝐒; 0 sinon.
    """
    ctx = resolve_context(ctx)
    if m == 1:
        return mpf(1)
    if not in_s_sequence(m):
        return mpf(0)
    r = model.r(m) if model is not None and m in model.terms else r_of_m(m)
    if r is None:
        raise DomainError(f"r({m}) introuvable: C({m}, n) non défini")
    factors = prime_power_factors(m)
    with ctx.workdps():
        x = (2 * n + 1 - m) * r * mp.pi
        result = mpf(2) ** len(factors)
        for q in factors:
            result *= mp.cos(x / q)
    return ctx.round(result)


class CosineIdentityReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    m: int
    r: Optional[int]
    r_j: List[int]
    mode: str
    holds: bool
    worst_residual: Optional[mpf] = None


def cosine_identity_check(m: int, r: int = None, mode: str = "exact",
                          ctx: PrecisionContext = None) -> CosineIdentityReport:
    """
    μ·∏cos((2n+1-m)rπ/q_k) = Σ_j cos((2n+1-m)r_jπ/m) sur une période n = 0..2m-1.

    mode "exact": comparaison des multiensembles de résidus après
    développement produit → somme; mode "numeric": évaluation à double
    précision, tolérance 10^{-digits/2}.
    """
    report = singularities_for(m)
    r = r if r is not None else r_of_m(m, report)
    r_j = report.r_values
    if r is None:
        return CosineIdentityReport(m=m, r=None, r_j=r_j, mode=mode, holds=False)

    if mode == "exact":
        holds = _cosine_multiset(r, m) == Counter(_reduced(x, m) for x in r_j)
        return CosineIdentityReport(m=m, r=r, r_j=r_j, mode=mode, holds=holds)
    if mode != "numeric":
        raise DomainError(f"Mode de vérification inconnu: {mode}")

    ctx = resolve_context(ctx)
    factors = prime_power_factors(m)
    mu = 2 ** (len(factors) - 1)
    worst = mpf(0)
    with mp.workdps(2 * ctx.working_digits):
        for n in range(2 * m):
            x = (2 * n + 1 - m) * mp.pi
            lhs = mu * mp.fprod(mp.cos(x * r / q) for q in factors)
            rhs = mp.fsum(mp.cos(x * rj / m) for rj in r_j)
            worst = max(worst, abs(lhs - rhs))
        holds = worst < mpf(10) ** (-ctx.digits / 2)
    return CosineIdentityReport(m=m, r=r, r_j=r_j, mode=mode, holds=holds, worst_residual=worst)


# ---- Analyse des résidus ----

class ResidualScan(BaseModel):
    """Résidus ρ(n) sur une fenêtre, couverture en chiffres et pente de décroissance."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    M_max: int
    window: Tuple[int, int]
    rows: List[dict]
    mean_coverage: float
    min_coverage: float
    decay_slope: float
    expected_slope: float
    next_m: int

    @property
    def decay_ok(self) -> bool:
        return self.decay_slope <= self.expected_slope + 0.05


def _check_window(table: FourierTable, window: Tuple[int, int]):
    n1, n2 = window
    if not 0 <= n1 <= n2:
        raise DomainError(f"Fenêtre invalide: {n1}:{n2}")
    if n2 > table.N:
        raise InsufficientOrderError(f"Fenêtre {n1}:{n2} hors de la table (N = {table.N})")


def _working_dps(table: FourierTable, window: Tuple[int, int]) -> int:
    return len(str(abs(int(table.A[window[1]])))) + 30


def _model_sum(n: int, members: List[int], model: AsymptoticModel, ctx: PrecisionContext) -> mpf:
    total = mpf(0)
    for m in members:
        x = (2 * n + 1) * mp.pi / (2 * m)
        total += C_coeff(m, n, model, ctx) * (x - 1) / x * mp.exp(x)
    return total


def residual_scan(table: FourierTable, window: Tuple[int, int], m_max: int,
                  model: AsymptoticModel = None, show_progress: bool = True) -> ResidualScan:
    """
    ρ(n) = 2(-1)ⁿA(n) - Σ_{m∈𝐒, m<=M_max} C(m,n)·E((2n+1)π/(2m)).

    La couverture est 1 - log|ρ|/log|2A(n)| bornée à [0, 1]. La pente de
    log|ρ(n)| est ajustée (numpy.polyfit) sur les maxima par blocs de
    longueur m', le successeur de M_max dans 𝐒; elle doit rester sous π/m'.
    """
    _check_window(table, window)
    n1, n2 = window
    model = model or build_model(m_max, show_progress=show_progress)
    members = s_sequence(m_max)
    next_m = next(m for m in s_sequence(4 * m_max + 20) if m > m_max)

    ctx = PrecisionContext(digits=_working_dps(table, window), guard=10)
    rows = []
    with ctx.workdps():
        for n in tqdm(range(n1, n2 + 1), desc="résidus", disable=Config.PRODUCTION_MODE or not show_progress):
            target = 2 * (-1) ** n * mpf(int(table.A[n]))
            rho = target - _model_sum(n, members, model, ctx.inner())
            log_rho = float(mp.log10(abs(rho))) if rho else float("-inf")
            log_a = float(mp.log10(abs(target))) if target else 0.0
            if not rho:
                coverage = 1.0
            elif log_a > 0:
                coverage = min(1.0, max(0.0, 1 - log_rho / log_a))
            else:
                coverage = 0.0
            rows.append({"n": n, "log10_abs_rho": log_rho, "coverage": coverage})

    # Pente de décroissance sur les maxima par blocs
    ns, logs = [], []
    for start in range(n1, n2 + 1, next_m):
        block = [row for row in rows if start <= row["n"] < start + next_m and math.isfinite(row["log10_abs_rho"])]
        if block:
            best = max(block, key=lambda row: row["log10_abs_rho"])
            ns.append(best["n"])
            logs.append(best["log10_abs_rho"] * math.log(10))
    slope = float(np.polyfit(ns, logs, 1)[0]) if len(ns) >= 2 else float("nan")

    coverages = [row["coverage"] for row in rows]
    return ResidualScan(
        M_max=m_max,
        window=(n1, n2),
        rows=rows,
        mean_coverage=float(np.mean(coverages)),
        min_coverage=float(np.min(coverages)),
        decay_slope=slope,
        expected_slope=math.pi / next_m,
        next_m=next_m,
    )


class CoefficientFit(BaseModel):
    """Estimation de C(m,n) par classe de n modulo m."""

    m: int
    window: Tuple[int, int]
    estimates: Dict[int, float]
    expected: Dict[int, float]
    max_error: float


def fit_unknown_C(table: FourierTable, window: Tuple[int, int], m: int,
                  model: AsymptoticModel = None) -> CoefficientFit:
    """
    Moindres carrés (numpy.linalg.lstsq) de y_n = ρ_m(n)/E((2n+1)π/(2m)) sur
    les indicatrices des classes de n modulo m, où ρ_m retire tous les termes
    de 𝐒 inférieurs à m.

    Pour m ∉ 𝐒 les estimations doivent être proches de 0 (rapporté, non supposé).
    """
    if m < 1:
        raise DomainError(f"m invalide: {m}")
    _check_window(table, window)
    n1, n2 = window
    model = model or build_model(max(m, 1), show_progress=False)
    members = [k for k in s_sequence(max(m, 1)) if k < m]

    ctx = PrecisionContext(digits=_working_dps(table, window), guard=10)
    ys, design = [], []
    with ctx.workdps():
        for n in range(n1, n2 + 1):
            target = 2 * (-1) ** n * mpf(int(table.A[n]))
            rho = target - _model_sum(n, members, model, ctx.inner())
            x = (2 * n + 1) * mp.pi / (2 * m)
            ys.append(float(rho / ((x - 1) / x * mp.exp(x))))
            row = [0.0] * m
            row[n % m] = 1.0
            design.append(row)

    coeffs, *_ = np.linalg.lstsq(np.array(design), np.array(ys), rcond=None)
    present = sorted({n % m for n in range(n1, n2 + 1)})
    estimates = {k: float(coeffs[k]) for k in present}
    expected = {k: float(C_coeff(m, k, model)) if in_s_sequence(m) else 0.0 for k in present}
    max_error = max(abs(estimates[k] - expected[k]) for k in present)
    return CoefficientFit(m=m, window=(n1, n2), estimates=estimates, expected=expected, max_error=max_error)
