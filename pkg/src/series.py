"""
Module d'arithmétique exacte sur les séries formelles tronquées.

Les coefficients appartiennent à un domaine paramétrable: entiers, Fraction,
PiQuadratic (valeurs r + s·π²) ou mpf/mpc lorsque des constantes
transcendantes interviennent. Une série porte un exposant préfacteur
rationnel (q^{1/2}, q^{1/24}...) stocké à part des coefficients indexés
par des entiers, et son ordre de troncature explicite.

Fonctionnalités:
    - ExactSeries immuable (addition, produit, réciproque, racine, exponentielle)
    - Produit par substitution de Kronecker pour les coefficients entiers et
      rationnels (identique bit à bit au produit naïf)
    - Opérateur θ = x·d/dx et polynômes en θ
    - Opérateur L de l'équation différentielle inhomogène de I₂

Utilisation:
    from src.series import ExactSeries, series_mul

    x = ExactSeries.variable(10)
    s = series_mul(1 + x, 1 - x)   # 1 - x²
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from mpmath import mp, mpf

from src.errors import InsufficientOrderError, SingularSeriesError
from src.precision import PrecisionContext, pi_squared, resolve_context

# Configuration du logger pour ce module
logger = logging.getLogger(__name__)

# Ordre minimal à partir duquel le produit de Kronecker est utilisé
KRONECKER_THRESHOLD = 24


@dataclass(frozen=True)
class PiQuadratic:
    """
    Valeur exacte r + s·π² avec r, s rationnels.

    Stable par addition et multiplication par un rationnel; le produit de
    deux valeurs n'est défini que si l'une des deux est purement rationnelle.

    Example:
        >>> PiQuadratic(0, Fraction(1, 2))   # π²/2
        PiQuadratic(r=Fraction(0, 1), s=Fraction(1, 2))
    """

    r: Fraction = Fraction(0)
    s: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "s", Fraction(self.s))

    @property
    def is_rational(self) -> bool:
        return self.s == 0

    @staticmethod
    def _coerce(other):
        if isinstance(other, PiQuadratic):
            return other
        if isinstance(other, (int, Fraction)):
            return PiQuadratic(Fraction(other), Fraction(0))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return PiQuadratic(self.r + other.r, self.s + other.s)

    __radd__ = __add__

    def __neg__(self):
        return PiQuadratic(-self.r, -self.s)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return PiQuadratic(self.r - other.r, self.s - other.s)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PiQuadratic(self.r * other, self.s * other)
        if isinstance(other, PiQuadratic):
            if other.is_rational:
                return self * other.r
            if self.is_rational:
                return other * self.r
            raise TypeError("Produit de deux valeurs en π²: terme en π⁴ non représentable")
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return PiQuadratic(self.r / other, self.s / other)
        if isinstance(other, PiQuadratic) and other.is_rational:
            return self / other.r
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.r == other.r and self.s == other.s

    def __hash__(self):
        return hash((self.r, self.s))

    def __bool__(self):
        return self.r != 0 or self.s != 0

    def value(self, ctx: PrecisionContext = None) -> mpf:
        """Valeur numérique r + s·π² à la précision de travail."""
        ctx = resolve_context(ctx)
        with ctx.workdps():
            return (mpf(self.r.numerator) / self.r.denominator
                    + mpf(self.s.numerator) / self.s.denominator * pi_squared(ctx))

    def __str__(self):
        return f"{self.r} + {self.s}·π²"


def coefficient_value(c, ctx: PrecisionContext = None):
    """Convertit un coefficient exact (int, Fraction, PiQuadratic) en mpf."""
    ctx = resolve_context(ctx)
    if isinstance(c, PiQuadratic):
        return c.value(ctx)
    with ctx.workdps():
        if isinstance(c, Fraction):
            return mpf(c.numerator) / c.denominator
        return mp.mpmathify(c)


def pochhammer(alpha, k: int) -> Fraction:
    """Symbole de Pochhammer (α)_k = α(α+1)…(α+k-1), exact pour α rationnel."""
    alpha = Fraction(alpha)
    return reduce(lambda acc, j: acc * (alpha + j), range(k), Fraction(1))


def _is_exact_rational(c) -> bool:
    return isinstance(c, (int, Fraction)) and not isinstance(c, bool)


@dataclass(frozen=True)
class ExactSeries:
    """
    Série tronquée x^r·Σ_{n=0}^{N} c_n xⁿ + O(x^{r+N+1}).

    Attributes:
        coeffs (tuple): coefficients c_0..c_N
        prefactor (Fraction): exposant préfacteur r (0 par défaut)
    """

    coeffs: tuple
    prefactor: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        object.__setattr__(self, "prefactor", Fraction(self.prefactor))
        if not self.coeffs:
            raise InsufficientOrderError("Série vide: au moins un coefficient est requis")

    @property
    def order(self) -> int:
        """Ordre de troncature N (dernier indice connu)."""
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value, order: int) -> "ExactSeries":
        return cls((value,) + (0,) * order)

    @classmethod
    def variable(cls, order: int) -> "ExactSeries":
        """La série x tronquée à l'ordre donné."""
        if order < 1:
            raise InsufficientOrderError("La variable x demande un ordre >= 1")
        return cls((0, 1) + (0,) * (order - 1))

    @classmethod
    def from_polynomial(cls, coeffs, order: int) -> "ExactSeries":
        """Polynôme (coefficients bas→haut) vu comme série d'ordre donné."""
        coeffs = list(coeffs)[: order + 1]
        return cls(tuple(coeffs) + (0,) * (order + 1 - len(coeffs)))

    def __getitem__(self, n: int):
        if n < 0 or n > self.order:
            raise IndexError(f"Coefficient {n} hors de l'ordre de troncature {self.order}")
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, order: int) -> "ExactSeries":
        if order > self.order:
            raise InsufficientOrderError(
                f"Troncature à l'ordre {order} impossible: série connue jusqu'à {self.order}"
            )
        return ExactSeries(self.coeffs[: order + 1], self.prefactor)

    def map(self, func) -> "ExactSeries":
        """Applique func à chaque coefficient (changement de domaine)."""
        return ExactSeries(tuple(func(c) for c in self.coeffs), self.prefactor)

    def scale(self, c) -> "ExactSeries":
        return ExactSeries(tuple(c * x for x in self.coeffs), self.prefactor)

    def mul_x(self, k: int = 1) -> "ExactSeries":
        """Multiplication par x^k (décalage des indices, ordre + k)."""
        return ExactSeries((0,) * k + self.coeffs, self.prefactor)

    def div_x(self, k: int = 1) -> "ExactSeries":
        """Division par x^k; les k premiers coefficients doivent être nuls."""
        if any(c != 0 for c in self.coeffs[:k]):
            raise SingularSeriesError(f"Division par x^{k} d'une série non divisible")
        if self.order < k:
            raise InsufficientOrderError(f"Division par x^{k} d'une série d'ordre {self.order}")
        return ExactSeries(self.coeffs[k:], self.prefactor)

    def integral_prefactor(self) -> "ExactSeries":
        """Absorbe la partie entière du préfacteur dans les coefficients."""
        shift = math.floor(self.prefactor)
        if shift == 0:
            return self
        if shift > 0:
            return ExactSeries((0,) * shift + self.coeffs, self.prefactor - shift)
        return ExactSeries(self.coeffs, self.prefactor - shift).div_x(-shift)

    def _aligned(self, other: "ExactSeries"):
        """Ramène deux séries au même préfacteur (différence entière requise)."""
        delta = other.prefactor - self.prefactor
        if delta.denominator != 1:
            raise ValueError(
                f"Préfacteurs incompatibles: {self.prefactor} et {other.prefactor}"
            )
        delta = int(delta)
        a, b = self, other
        if delta > 0:
            b = ExactSeries((0,) * delta + b.coeffs, self.prefactor)
        elif delta < 0:
            a = ExactSeries((0,) * (-delta) + a.coeffs, other.prefactor)
        order = min(a.order, b.order)
        return a.coeffs[: order + 1], b.coeffs[: order + 1], a.prefactor

    def _as_series(self, other) -> "ExactSeries":
        if isinstance(other, ExactSeries):
            return other
        return ExactSeries.constant(other, self.order)

    def __add__(self, other):
        other = self._as_series(other)
        a, b, r = self._aligned(other)
        return ExactSeries(tuple(x + y for x, y in zip(a, b)), r)

    __radd__ = __add__

    def __neg__(self):
        return ExactSeries(tuple(-c for c in self.coeffs), self.prefactor)

    def __sub__(self, other):
        return self + (-self._as_series(other))

    def __rsub__(self, other):
        return self._as_series(other) - self

    def __mul__(self, other):
        if isinstance(other, ExactSeries):
            return series_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        return series_pow(self, e)

    def equals_through(self, other: "ExactSeries", order: int) -> bool:
        """Égalité exacte des coefficients jusqu'à l'ordre donné inclus."""
        a, b, _ = self._aligned(other)
        if len(a) <= order:
            raise InsufficientOrderError(
                f"Comparaison jusqu'à l'ordre {order} impossible (ordre commun {len(a) - 1})"
            )
        return all(x == y for x, y in zip(a[: order + 1], b[: order + 1]))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def evaluate(self, x, x_prefactor=None):
        """
        Évalue numériquement x^r·Σ c_n xⁿ (schéma de Horner).

        Args:
            x: point d'évaluation (mpf ou mpc)
            x_prefactor: valeur de x^r si déjà connue (évite l'ambiguïté de
                branche pour x complexe)
        """
        total = 0
        for c in reversed(self.coeffs):
            value = c.value() if isinstance(c, PiQuadratic) else c
            if isinstance(value, Fraction):
                value = mpf(value.numerator) / value.denominator
            total = total * x + value
        if self.prefactor == 0:
            return total
        if x_prefactor is None:
            x_prefactor = mp.power(x, mpf(self.prefactor.numerator) / self.prefactor.denominator)
        return total * x_prefactor


def _pack_signed(values, k_bytes: int) -> int:
    """Évalue Σ v_i·2^{8·k_bytes·i} en passant par les octets (coût linéaire)."""
    positive = b"".join(max(v, 0).to_bytes(k_bytes, "little") for v in values)
    negative = b"".join(max(-v, 0).to_bytes(k_bytes, "little") for v in values)
    return int.from_bytes(positive, "little") - int.from_bytes(negative, "little")


def _kronecker_int(a, b, order: int) -> list:
    """Produit tronqué de deux listes d'entiers par substitution de Kronecker."""
    a = a[: order + 1]
    b = b[: order + 1]
    bound = max(abs(x) for x in a) * max(abs(y) for y in b) * min(len(a), len(b))
    if bound == 0:
        return [0] * (order + 1)

    # Chaque coefficient du produit tient dans k-1 bits signés
    k_bytes = (bound.bit_length() + 2 + 7) // 8
    k_bits = 8 * k_bytes
    count = len(a) + len(b) - 1

    product = _pack_signed(a, k_bytes) * _pack_signed(b, k_bytes)

    # Décalage de 2^{k-1} sur chaque chiffre: tous les chiffres deviennent positifs
    half = 1 << (k_bits - 1)
    offset = int.from_bytes((b"\x00" * (k_bytes - 1) + b"\x80") * count, "little")
    raw = (product + offset).to_bytes(count * k_bytes, "little")

    kept = min(count, order + 1)
    out = [
        int.from_bytes(raw[i * k_bytes:(i + 1) * k_bytes], "little") - half
        for i in range(kept)
    ]
    return out + [0] * (order + 1 - kept)


def _common_denominator(values) -> int:
    return math.lcm(*(Fraction(v).denominator for v in values))


def mul_kronecker(a: ExactSeries, b: ExactSeries) -> ExactSeries:
    """
    Produit de Cauchy par substitution de Kronecker (entiers ou rationnels).

    Les rationnels sont ramenés aux entiers par un dénominateur commun;
    la multiplication d'entiers de Python (Karatsuba) rend l'ensemble
    sous-quadratique.
    """
    order = min(a.order, b.order)
    prefactor = a.prefactor + b.prefactor
    if all(isinstance(c, int) for c in a.coeffs) and all(isinstance(c, int) for c in b.coeffs):
        return ExactSeries(_kronecker_int(list(a.coeffs), list(b.coeffs), order), prefactor)

    da = _common_denominator(a.coeffs[: order + 1])
    db = _common_denominator(b.coeffs[: order + 1])
    ia = [int(Fraction(c) * da) for c in a.coeffs[: order + 1]]
    ib = [int(Fraction(c) * db) for c in b.coeffs[: order + 1]]
    scale = da * db
    coeffs = [Fraction(c, scale) for c in _kronecker_int(ia, ib, order)]
    return ExactSeries(coeffs, prefactor)


def mul_schoolbook(a: ExactSeries, b: ExactSeries) -> ExactSeries:
    """Produit de Cauchy naïf, valable pour tout domaine de coefficients."""
    order = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    coeffs = [sum(ac[i] * bc[n - i] for i in range(n + 1)) for n in range(order + 1)]
    return ExactSeries(coeffs, a.prefactor + b.prefactor)


def series_mul(a: ExactSeries, b: ExactSeries) -> ExactSeries:
    """
    Produit de deux séries tronqué à l'ordre minimal; les préfacteurs s'ajoutent.

    Le produit de Kronecker est choisi au-delà de KRONECKER_THRESHOLD pour
    les coefficients entiers ou rationnels; il coïncide exactement avec le
    produit naïf.
    """
    order = min(a.order, b.order)
    exact = all(_is_exact_rational(c) for c in a.coeffs[: order + 1]) and all(
        _is_exact_rational(c) for c in b.coeffs[: order + 1]
    )
    if exact and order >= KRONECKER_THRESHOLD:
        return mul_kronecker(a, b)
    return mul_schoolbook(a, b)


def _invert_scalar(c):
    if c == 0:
        raise SingularSeriesError("Terme constant nul: série non inversible")
    if isinstance(c, int):
        return c if c in (1, -1) else Fraction(1, c)
    if isinstance(c, PiQuadratic):
        if not c.is_rational:
            raise SingularSeriesError("Inversion d'un terme constant en π² non supportée")
        return 1 / c.r
    return 1 / c


def series_reciprocal(a: ExactSeries) -> ExactSeries:
    """
    Inverse 1/a d'une série de terme constant non nul; préfacteur opposé.

    Les coefficients restent entiers si a est entière de terme constant ±1.

    Raises:
        SingularSeriesError: si le terme constant est nul
    """
    inv0 = _invert_scalar(a.coeffs[0])
    ac = a.coeffs
    out = [inv0]
    for n in range(1, a.order + 1):
        acc = sum(ac[k] * out[n - k] for k in range(1, n + 1))
        out.append(-acc * inv0)
    return ExactSeries(out, -a.prefactor)


def _rational_sqrt(c) -> Fraction:
    c = Fraction(c)
    if c <= 0:
        raise SingularSeriesError(f"Terme constant {c} sans racine carrée rationnelle positive")
    num, den = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if num * num != c.numerator or den * den != c.denominator:
        raise SingularSeriesError(f"Terme constant {c} non carré dans ℚ")
    return Fraction(num, den)


def series_sqrt(a: ExactSeries) -> ExactSeries:
    """
    Racine carrée d'une série dont le terme constant est un carré rationnel
    (ou un mpf positif); le préfacteur est divisé par deux.
    """
    c0 = a.coeffs[0]
    b0 = _rational_sqrt(c0) if _is_exact_rational(c0) else mp.sqrt(c0)
    ac = a.coeffs
    out = [b0]
    for n in range(1, a.order + 1):
        acc = sum(out[k] * out[n - k] for k in range(1, n))
        out.append((ac[n] - acc) / (2 * b0))
    return ExactSeries(out, a.prefactor / 2)


def series_pow(a: ExactSeries, e: int) -> ExactSeries:
    """Puissance entière (exponentiation binaire; exposant négatif via l'inverse)."""
    if e < 0:
        return series_pow(series_reciprocal(a), -e)
    result = ExactSeries.constant(1, a.order)
    base = a
    while e:
        if e & 1:
            result = series_mul(result, base)
        e >>= 1
        if e:
            base = series_mul(base, base)
    return result


def series_exp(a: ExactSeries) -> ExactSeries:
    """
    exp(a) pour une série sans terme constant: e_n = (1/n)·Σ k·a_k·e_{n-k}.
    """
    if a.prefactor != 0 or a.coeffs[0] != 0:
        raise SingularSeriesError("exp d'une série: terme constant nul et préfacteur 0 requis")
    ac = a.coeffs
    out = [1]
    for n in range(1, a.order + 1):
        acc = sum(k * ac[k] * out[n - k] for k in range(1, n + 1))
        out.append(acc / n if not isinstance(acc, int) else Fraction(acc, n))
    return ExactSeries(out)


def theta_poly_apply(a: ExactSeries, poly) -> ExactSeries:
    """
    Applique P(θ), θ = x·d/dx: c_n ↦ P(n + r)·c_n.

    Args:
        poly: coefficients de P du degré 0 au degré le plus haut
    """
    r = a.prefactor

    def weight(n):
        t = n + r if r else n
        return sum(p * t ** i for i, p in enumerate(poly))

    return ExactSeries(tuple(weight(n) * c for n, c in enumerate(a.coeffs)), r)


def theta_apply(a: ExactSeries, k: int) -> ExactSeries:
    """θ^k: c_n ↦ (n + r)^k·c_n."""
    return theta_poly_apply(a, [0] * k + [1])


def apply_L(series_of_i2: ExactSeries) -> ExactSeries:
    """
    Opérateur L(f, θ) appliqué à la série de I₂(f).

    Calcule (1/f)(θ³ − 2f(θ³+θ)f + f²θ³f²)(1/(1+f)) de droite à gauche:
    multiplication par 1/(1+f), opérateur entre parenthèses (chaque f est
    l'opérateur de multiplication), puis division par f.

    Args:
        series_of_i2 (ExactSeries): développement en f de I₂, ordre N >= 8

    Returns:
        ExactSeries: série en f d'ordre N - 1

    Raises:
        InsufficientOrderError: si N < 8
    """
    n = series_of_i2.order
    if n < 8:
        raise InsufficientOrderError(f"apply_L demande un ordre >= 8 (reçu {n})")

    one_plus_f = ExactSeries.from_polynomial([1, 1], n)
    y = series_mul(series_of_i2, series_reciprocal(one_plus_f))

    fy = y.mul_x(1)
    middle = (theta_apply(fy, 3) + theta_apply(fy, 1)).mul_x(1).scale(2)
    outer = theta_apply(y.mul_x(2), 3).mul_x(2)

    bracket = theta_apply(y, 3) - middle + outer
    return bracket.div_x(1)
