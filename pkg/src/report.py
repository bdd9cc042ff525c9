"""
Module des rapports de vérification.

Chaque suite produit un SuiteReport (liste de CheckItem) écrit en JSON
selon le schéma {suite, scale, items: [{name, status, detail}], wall_time_ms}.
Les éléments en échec sont en plus exportés dans <nom>_failures.json, au
format des enregistrements d'erreurs (index, record, error, error_type).

Utilisation:
    from src.report import CheckItem, SuiteReport, write_report

    report = SuiteReport(suite="involution", scale={"count": 20})
    report.add(CheckItem(name="f = 0.3", status="pass", detail="résidu 1e-52"))
    write_report(report, "data/reports/involution.json")
"""

import json
import logging
from pathlib import Path
from typing import List, Optional

from mpmath import mp
from pydantic import BaseModel, Field, field_validator

from src.config import Config

# Configuration du logger pour ce module
logger = logging.getLogger(__name__)

# Statuts possibles d'un contrôle
STATUSES = ("pass", "fail", "violation", "skipped")

# Suites connues de la commande verify
SUITES = (
    "involution",
    "theorem1",
    "theorem2",
    "lemma2",
    "conjecture1",
    "conjecture2",
    "laurent",
    "certificates",
    "all",
)

# Formats de sortie
OUTPUT_FORMATS = ("json", "csv", "text")


class CheckItem(BaseModel):
    """
    Résultat d'un contrôle élémentaire.

    "violation" signale un contre-exemple à une propriété conjecturale: ce
    n'est pas une erreur de calcul mais le contrôle échoue quand même.
    """

    name: str = Field(..., json_schema_extra={"example": "A(n) entiers pour n <= 1000"})
    status: str = Field(..., json_schema_extra={"example": "pass"})
    detail: str = Field("", json_schema_extra={"example": "1000 entiers confirmés"})
    worst_residual: Optional[str] = Field(None, json_schema_extra={"example": "3.2e-52"})

    @field_validator("status")
    def status_ok(cls, v):
        if v not in STATUSES:
            raise ValueError(f"Statut invalide: {v}. Statuts valides: {', '.join(STATUSES)}")
        return v

    @property
    def failed(self) -> bool:
        return self.status in ("fail", "violation")


class SuiteReport(BaseModel):
    """Rapport d'une suite de vérification."""

    suite: str = Field(..., json_schema_extra={"example": "involution"})
    scale: dict = {}
    items: List[CheckItem] = []
    wall_time_ms: int = 0

    def add(self, item: CheckItem) -> CheckItem:
        self.items.append(item)
        marker = "✓" if item.status == "pass" else ("⚠" if item.status == "skipped" else "✗")
        log = logger.info if not item.failed else logger.warning
        log(f"{marker} [{self.suite}] {item.name}: {item.detail}")
        return item

    def check(self, name: str, ok: bool, detail: str = "", status_on_failure: str = "fail",
              worst_residual=None) -> CheckItem:
        """Ajoute un contrôle booléen (pass ou status_on_failure)."""
        residual = fmt(worst_residual) if worst_residual is not None else None
        return self.add(CheckItem(
            name=name,
            status="pass" if ok else status_on_failure,
            detail=detail,
            worst_residual=residual,
        ))

    def extend(self, other: "SuiteReport"):
        """Fusionne les éléments d'une autre suite (préfixés par son nom)."""
        for item in other.items:
            self.items.append(item.model_copy(update={"name": f"{other.suite}: {item.name}"}))
        self.scale[other.suite] = other.scale

    @property
    def passed(self) -> bool:
        return not any(item.failed for item in self.items)

    @property
    def first_failure(self) -> Optional[CheckItem]:
        return next((item for item in self.items if item.failed), None)

    def as_text(self) -> str:
        lines = [f"Suite {self.suite} ({self.wall_time_ms} ms)"]
        for item in self.items:
            lines.append(f"  [{item.status:>9}] {item.name}: {item.detail}")
        lines.append("RÉSULTAT: " + ("SUCCÈS" if self.passed else f"ÉCHEC ({self.first_failure.name})"))
        return "\n".join(lines)


class RunConfig(BaseModel):
    """Paramètres d'une exécution en ligne de commande."""

    precision_digits: int = Field(Config.PRECISION_DIGITS, json_schema_extra={"example": 50})
    terms: int = Field(Config.FOURIER_TERMS, json_schema_extra={"example": 1000})
    output_format: str = Field("json", json_schema_extra={"example": "csv"})
    suite: str = Field("all", json_schema_extra={"example": "conjecture1"})
    seed: int = Field(Config.RANDOM_SEED, json_schema_extra={"example": 20240101})
    m_max: int = Field(Config.ASYMPTOTIC_M_MAX, json_schema_extra={"example": 5000})
    window: str = Field(Config.RESIDUAL_WINDOW, json_schema_extra={"example": "200:400"})
    oracle: bool = False

    @field_validator("precision_digits")
    def precision_ok(cls, v):
        if v < 10:
            raise ValueError(f"Précision insuffisante: {v} chiffres (minimum 10)")
        return v

    @field_validator("terms")
    def terms_ok(cls, v):
        if v < 1:
            raise ValueError(f"Nombre de termes invalide: {v} (minimum 1)")
        return v

    @field_validator("output_format")
    def format_ok(cls, v):
        if v not in OUTPUT_FORMATS:
            raise ValueError(f"Format inconnu: {v}. Formats valides: {', '.join(OUTPUT_FORMATS)}")
        return v

    @field_validator("suite")
    def suite_ok(cls, v):
        if v not in SUITES:
            raise ValueError(f"Suite inconnue: {v}. Suites valides: {', '.join(SUITES)}")
        return v

    @field_validator("window")
    def window_ok(cls, v):
        parts = v.split(":")
        if len(parts) != 2 or not all(p.strip().isdigit() for p in parts) or int(parts[0]) > int(parts[1]):
            raise ValueError(f"Fenêtre invalide: {v} (format attendu N1:N2 avec N1 <= N2)")
        return v

    @property
    def window_bounds(self):
        n1, n2 = self.window.split(":")
        return int(n1), int(n2)


def fmt(x, digits: int = 6) -> str:
    """Représentation courte d'un mpf pour les champs detail."""
    return mp.nstr(x, digits)


def write_report(report: SuiteReport, out_file: str) -> Path:
    """
    Écrit le rapport JSON et, s'il y a des échecs, <nom>_failures.json.

    Args:
        report (SuiteReport): rapport à exporter
        out_file (str): chemin du fichier JSON

    Returns:
        Path: chemin du rapport écrit
    """
    output_path = Path(out_file)
    try:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(
            json.dumps(report.model_dump(), indent=2, ensure_ascii=False),
            encoding="utf8"
        )
        logger.info(f"✓ Rapport exporté: {output_path}")

        failures = [
            {
                "index": index,
                "record": item.name,
                "error": item.detail,
                "error_type": item.status,
            }
            for index, item in enumerate(report.items)
            if item.failed
        ]
        if failures:
            failures_file = output_path.with_name(f"{output_path.stem}_failures.json")
            failures_file.write_text(
                json.dumps(failures, indent=2, ensure_ascii=False),
                encoding="utf8"
            )
            logger.warning(f"⚠ Échecs exportés: {failures_file}")
    except Exception as e:
        logger.error(f"Erreur lors de l'écriture du rapport {out_file}: {e}")
        raise
    return output_path
