"""
Module de précision arbitraire de MagAGM.

Ce module fournit le contexte de précision (chiffres demandés + chiffres de
garde), la moyenne arithmético-géométrique, l'intégrale elliptique I₁, le nome
q associé à un module f et les valeurs de Gamma utilisées par les formes closes.

Fonctionnalités:
    - PrecisionContext immuable (validation Pydantic)
    - AGM avec critère d'arrêt relatif
    - Γ(1/4) par l'AGM, Γ(x) rationnel par une implémentation indépendante
    - Constantes mémoïsées par précision (π², e^{-π}, √2)

Utilisation:
    from src.precision import PrecisionContext, agm

    ctx = PrecisionContext(digits=40)
    g = agm(1, 2, ctx)
"""

import logging
from fractions import Fraction
from functools import lru_cache

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.config import Config
from src.errors import DomainError

# Configuration du logger pour ce module
logger = logging.getLogger(__name__)

# Les valeurs numériques sont des mpf / mpc de mpmath à la précision de travail
BigReal = mpf
BigComplex = mpc

# Garde-fou: l'AGM converge quadratiquement, même pour des arguments très déséquilibrés
_AGM_MAX_ITERATIONS = 200


class PrecisionContext(BaseModel):
    """
    Contexte de précision immuable.

    Les calculs sont menés à digits + guard chiffres décimaux puis arrondis
    à digits chiffres au moment de rendre le résultat.

    Attributes:
        digits (int): Précision demandée (au moins 10 chiffres)
        guard (int): Chiffres de garde (par défaut 20)

    Example:
        >>> ctx = PrecisionContext(digits=30)
        >>> ctx.working_digits
        50
    """

    model_config = ConfigDict(frozen=True)

    digits: int = Field(..., json_schema_extra={"example": 50})
    guard: int = Field(20, json_schema_extra={"example": 20})

    @field_validator("digits")
    def digits_ok(cls, v):
        if v < 10:
            raise ValueError(f"Précision insuffisante: {v} chiffres (minimum 10)")
        return v

    @field_validator("guard")
    def guard_ok(cls, v):
        if v < 0:
            raise ValueError(f"Nombre de chiffres de garde négatif: {v}")
        return v

    @property
    def working_digits(self) -> int:
        return self.digits + self.guard

    def workdps(self):
        """Gestionnaire de contexte mpmath à la précision de travail."""
        return mp.workdps(self.working_digits)

    def round(self, x):
        """Arrondit une valeur mpf/mpc à la précision demandée."""
        with mp.workdps(self.digits):
            return +x

    def inner(self) -> "PrecisionContext":
        """
        Contexte pour les appels internes: la précision de travail devient
        la précision demandée, sans garde supplémentaire, de sorte qu'un appel
        imbriqué ne tronque pas les chiffres de garde de l'appelant.
        """
        return PrecisionContext(digits=self.working_digits, guard=0)

    def doubled(self) -> "PrecisionContext":
        """Contexte de contrôle: chiffres de garde doublés (au moins 20)."""
        return PrecisionContext(digits=self.digits, guard=max(2 * self.guard, 20))

    def tolerance(self, loss: int = 0) -> mpf:
        """Retourne 10^{-(digits - loss)} à la précision de travail."""
        with self.workdps():
            return mpf(10) ** (loss - self.digits)


def resolve_context(ctx: PrecisionContext = None) -> PrecisionContext:
    """Retourne ctx, ou le contexte par défaut de la configuration."""
    return ctx if ctx is not None else Config.default_context()


def to_big_real(value, ctx: PrecisionContext = None) -> mpf:
    """
    Convertit un nombre (int, Fraction, chaîne décimale, mpf) en mpf
    à la précision de travail du contexte.

    Les chaînes sont lues exactement en décimal ("0.3" n'est pas le
    flottant binaire 0.3), les Fraction par division exacte.
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        if isinstance(value, Fraction):
            return mpf(value.numerator) / value.denominator
        return mpf(value)


def mpf_to_fraction(x: mpf) -> Fraction:
    """Conversion exacte d'un mpf binaire en Fraction."""
    man, exp = mpf(x).man_exp
    if exp >= 0:
        return Fraction(int(man) * 2 ** int(exp))
    return Fraction(int(man), 2 ** int(-exp))


@lru_cache(maxsize=None)
def pi_squared(ctx: PrecisionContext) -> mpf:
    with ctx.workdps():
        return mp.pi ** 2


@lru_cache(maxsize=None)
def exp_minus_pi(ctx: PrecisionContext) -> mpf:
    with ctx.workdps():
        return mp.exp(-mp.pi)


@lru_cache(maxsize=None)
def sqrt2(ctx: PrecisionContext) -> mpf:
    with ctx.workdps():
        return mp.sqrt(2)


def agm(a, b, ctx: PrecisionContext = None) -> mpf:
    """
    Moyenne arithmético-géométrique de deux réels strictement positifs.

    Itère a' = (a+b)/2, b' = √(ab) jusqu'à |a-b| < 10^{-(digits+guard)}·a.
    Le critère est relatif afin de traiter correctement les petits arguments.

    Args:
        a: premier argument (> 0)
        b: second argument (> 0)
        ctx (PrecisionContext, optional): contexte de précision

    Returns:
        mpf: agm(a, b) arrondi à ctx.digits

    Raises:
        DomainError: si a <= 0 ou b <= 0

    Example:
        >>> agm(1, 1)
        mpf('1.0')
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        a = to_big_real(a, ctx.inner())
        b = to_big_real(b, ctx.inner())
        if a <= 0 or b <= 0:
            raise DomainError(f"AGM définie pour des arguments positifs: a={a}, b={b}")

        eps = mpf(10) ** (-ctx.working_digits)
        for _ in range(_AGM_MAX_ITERATIONS):
            if abs(a - b) <= eps * a:
                break
            a, b = (a + b) / 2, mp.sqrt(a * b)
        else:
            logger.warning(f"⚠ AGM non convergée après {_AGM_MAX_ITERATIONS} itérations")

        result = (a + b) / 2
    return ctx.round(result)


def elliptic_I1(f, ctx: PrecisionContext = None) -> mpf:
    """
    Intégrale elliptique I₁(f) = ∫₀^{π/2} dα/√(cos²α + f²sin²α) = π/(2·agm(1, f)).

    Raises:
        DomainError: si f <= 0
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        f = to_big_real(f, ctx.inner())
        if f <= 0:
            raise DomainError(f"I₁(f) requiert f > 0 (reçu {f})")
        result = mp.pi / (2 * agm(1, f, ctx.inner()))
    return ctx.round(result)


@lru_cache(maxsize=None)
def gamma_quarter(ctx: PrecisionContext = None) -> mpf:
    """
    Γ(1/4) par la relation de Gauss Γ(1/4)² = (2π)^{3/2}/agm(1, √2).

    Indépendant de gamma_rational, ce qui rend non circulaires les
    vérifications croisées des constantes de la série de Laurent.
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        g = agm(1, sqrt2(ctx.inner()), ctx.inner())
        result = mp.sqrt((2 * mp.pi) ** mpf(1.5) / g)
    return ctx.round(result)


def gamma_rational(x, ctx: PrecisionContext = None) -> mpf:
    """
    Γ(x) pour un rationnel x > 0.

    Délègue à mp.gamma (série asymptotique décalée avec reste borné),
    sur l'argument rationnel exact converti à la précision de travail.

    Args:
        x: rationnel (Fraction, int ou chaîne "p/q")

    Raises:
        DomainError: si x <= 0
    """
    ctx = resolve_context(ctx)
    x = Fraction(x)
    if x <= 0:
        raise DomainError(f"Γ(x) n'est calculée que pour x > 0 (reçu {x})")
    with ctx.workdps():
        result = mp.gamma(to_big_real(x, ctx.inner()))
    return ctx.round(result)


def nome_from_f(f, ctx: PrecisionContext = None) -> mpf:
    """
    Nome q = exp(-π·agm(1+f, 1-f)/agm(1, f)) associé à 0 < f < 1.

    Raises:
        DomainError: si f n'est pas dans ]0, 1[
    """
    ctx = resolve_context(ctx)
    with ctx.workdps():
        f = to_big_real(f, ctx.inner())
        if not 0 < f < 1:
            raise DomainError(f"Le nome n'est défini que pour 0 < f < 1 (reçu {f})")
        inner = ctx.inner()
        result = mp.exp(-mp.pi * agm(1 + f, 1 - f, inner) / agm(1, f, inner))
    return ctx.round(result)
