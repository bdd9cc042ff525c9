"""
Exceptions communes à tous les modules de MagAGM.

Les erreurs de domaine héritent de ValueError pour rester compatibles
avec le code appelant qui attrape les erreurs standard. Les violations de
conjectures ne sont pas des exceptions: elles sont rapportées (voir report.py).
"""


class MagAgmError(Exception):
    """Classe de base des erreurs de la bibliothèque."""


class DomainError(MagAgmError, ValueError):
    """Argument hors du domaine de définition d'une opération."""


class PoleError(DomainError):
    """Évaluation en un pôle (f = -1, ψ = 0, voisinage d'un pôle de φ)."""


class SingularSeriesError(MagAgmError, ZeroDivisionError):
    """Série non inversible (terme constant nul) ou racine non rationnelle."""


class InsufficientOrderError(MagAgmError, ValueError):
    """Ordre de troncature trop faible pour l'opération demandée."""


class UnsupportedPrecisionError(MagAgmError, ValueError):
    """Précision demandée au-delà du plafond de l'oracle."""


class PrecisionInsufficientError(MagAgmError):
    """Reconstruction rationnelle impossible ou instable à la précision courante."""


class ConsistencyError(MagAgmError):
    """Deux calculs exacts censés coïncider donnent des résultats différents."""


class TruncationError(MagAgmError):
    """Table trop courte pour garantir la tolérance demandée."""


class ConstructionError(MagAgmError, ValueError):
    """Donnée de singularité impossible à construire (pas d'inverse modulaire)."""
