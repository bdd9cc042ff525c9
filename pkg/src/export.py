"""
Module d'export des tables de coefficients et des balayages.

Toutes les valeurs exactes sont écrites sous forme de chaînes: entiers
décimaux, rationnels "p/q", ou couples (r, s) pour les valeurs r + s·π².
Aucune valeur n'est arrondie en flottant binaire.

Fonctionnalités:
    - Tables a, A, c, T et S₀ en DataFrame pandas
    - Export CSV (ligne d'en-tête) ou JSON (métadonnées, somme sha256)
    - Conversion des balayages de résidus et des singularités

Utilisation:
    from src.export import coefficient_table, export_table

    frame = coefficient_table("a", 3)
    export_table(frame, "data/reports/a.csv", fmt="csv")
"""

import hashlib
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import List

import pandas as pd

from src.asymptotics import ResidualScan, SingularityReport
from src.errors import DomainError
from src.integral import a_coeffs, t_coeffs, y_coeffs
from src.laurent import LaurentResult, phi_laurent
from src.modular import FourierTable, phi_qexp
from src.precision import PrecisionContext

# Configuration du logger pour ce module
logger = logging.getLogger(__name__)

# Familles de coefficients exportables
COEFF_KINDS = ("a", "A", "c", "T", "S0")


def exact_string(value) -> str:
    """Représentation exacte: "12", "-4/9" (jamais de flottant)."""
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    raise DomainError(f"Valeur non exacte: {value!r} ({type(value).__name__})")


def fourier_table_to_frame(table: FourierTable, count: int = None) -> pd.DataFrame:
    """Colonnes n, A (chaînes d'entiers; rationnels si la table contient des violations)."""
    count = min(count or table.N + 1, table.N + 1)
    return pd.DataFrame({
        "n": list(range(count)),
        "A": [exact_string(Fraction(a)) for a in table.A[:count]],
    })


def laurent_to_records(result: LaurentResult) -> List[dict]:
    """Enregistrements {n, numerator, denominator, c} pour c_1..c_N."""
    return [
        {
            "n": n,
            "numerator": str(c.numerator),
            "denominator": str(c.denominator),
            "c": exact_string(c),
        }
        for n, c in enumerate(result.c, start=1)
    ]


def residual_scan_to_frame(scan: ResidualScan) -> pd.DataFrame:
    return pd.DataFrame(scan.rows, columns=["n", "log10_abs_rho", "coverage"])


def singularity_report_records(reports: List[SingularityReport]) -> List[dict]:
    """Une ligne par singularité: m, (γ, δ), matrice, w et r."""
    records = []
    for report in reports:
        for datum in report.data:
            records.append({
                "m": datum.m,
                "gamma": datum.gamma,
                "delta": datum.delta,
                "matrix": list(datum.matrix),
                "w": datum.w,
                "r": datum.r,
            })
    return records


def coefficient_table(kind: str, count: int, ctx: PrecisionContext = None) -> pd.DataFrame:
    """
    Table des count premiers coefficients d'une famille.

    Args:
        kind (str): "a" (partie impaire de I₂), "A" (Fourier de φ),
            "c" (Laurent, indices 1..count), "T" ou "S0"
        count (int): nombre de lignes (>= 1)

    Returns:
        pd.DataFrame: colonnes n et value; pour S0, colonnes r et s en plus

    Raises:
        DomainError: si kind est inconnu ou count < 1
    """
    if kind not in COEFF_KINDS:
        raise DomainError(f"Famille inconnue: {kind}. Familles valides: {', '.join(COEFF_KINDS)}")
    if count < 1:
        raise DomainError(f"Nombre de coefficients invalide: {count} (minimum 1)")

    if kind == "a":
        values = a_coeffs(count - 1)
    elif kind == "A":
        values = phi_qexp(max(count - 1, 1)).A[:count]
    elif kind == "T":
        values = t_coeffs(count - 1)
    elif kind == "c":
        result = phi_laurent(count, ctx)
        return pd.DataFrame({"n": list(range(1, count + 1)), "value": [exact_string(c) for c in result.c]})
    else:
        values = y_coeffs(count - 1)
        return pd.DataFrame({
            "n": list(range(count)),
            "value": [str(v) for v in values],
            "r": [exact_string(v.r) for v in values],
            "s": [exact_string(v.s) for v in values],
        })

    return pd.DataFrame({"n": list(range(count)), "value": [exact_string(Fraction(v)) for v in values]})


def checksum(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def export_to_json(data, out_file: str) -> Path:
    """
    Exporte des données au format JSON (indentation, accents conservés).

    Raises:
        Exception: en cas d'erreur d'écriture
    """
    try:
        output_path = Path(out_file)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(json.dumps(data, indent=2, ensure_ascii=False), encoding="utf8")
        logger.info(f"{len(data)} enregistrement(s) exporté(s) vers {output_path}")
        return output_path
    except Exception as e:
        logger.error(f"Erreur lors de l'écriture du fichier {out_file}: {e}")
        raise


def export_table(frame: pd.DataFrame, out_file: str, fmt: str = "csv", metadata: dict = None) -> str:
    """
    Écrit une table en CSV (en-tête, sans index) ou en JSON.

    Le JSON contient {metadata, rows, sha256}, la somme portant sur la
    sérialisation des lignes. Pour le CSV, la somme du fichier est renvoyée
    et journalisée.

    Returns:
        str: somme sha256
    """
    output_path = Path(out_file)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        frame.to_csv(output_path, index=False)
        digest = checksum(output_path)
    elif fmt == "json":
        rows = json.loads(frame.to_json(orient="records", force_ascii=False))
        digest = hashlib.sha256(json.dumps(rows, ensure_ascii=False).encode("utf8")).hexdigest()
        payload = {"metadata": metadata or {}, "rows": rows, "sha256": digest}
        output_path.write_text(json.dumps(payload, indent=2, ensure_ascii=False), encoding="utf8")
    else:
        raise DomainError(f"Format d'export inconnu: {fmt} (csv ou json)")
    logger.info(f"✓ Table exportée: {output_path} ({len(frame)} lignes, sha256 {digest[:12]}…)")
    return digest


def export_fourier_table(table: FourierTable, out_stem: str) -> dict:
    """CSV n, A(n) et JSON avec troncature, violations et somme sha256."""
    frame = fourier_table_to_frame(table)
    csv_digest = export_table(frame, f"{out_stem}.csv", fmt="csv")
    json_digest = export_table(
        frame,
        f"{out_stem}.json",
        fmt="json",
        metadata={"truncation": table.N, "violations": table.violations, "csv_sha256": csv_digest},
    )
    return {"csv": csv_digest, "json": json_digest}
