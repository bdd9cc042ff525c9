"""
Point d'entrée en ligne de commande de MagAGM.

Commandes:
1. eval: valeur de I₂(f) et plan de réduction (--oracle: écart à la quadrature)
2. verify: suites de vérification, rapport JSON écrit dans --out
3. coeffs: tables exactes a, A, c, T, S0 (CSV, JSON ou texte)
4. config: affichage de la configuration

La sortie standard ne contient que les résultats; les logs et les barres
de progression vont sur la sortie d'erreur.

Codes de sortie:
    0: succès, 1: échec d'une vérification, 2: erreur d'usage ou de domaine

Utilisation:
    python -m src.main eval --f 0.3 --prec 40
    python -m src.main verify --suite conjecture1 --terms 1000
    python -m src.main coeffs --kind A --count 10
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import pandas as pd
from mpmath import mp
from pydantic import ValidationError

from src.config import Config
from src.errors import MagAgmError
from src.export import COEFF_KINDS, coefficient_table, export_table
from src.integral import i2_eval, i2_quadrature, reduce_f
from src.report import OUTPUT_FORMATS, SUITES, RunConfig, write_report
from src.verify import run_suite

# Configuration du logger pour ce module
logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magagm",
        description="Intégrale double magnétique I₂(f), forme modulaire φ(τ) et vérifications associées",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=Config.PRECISION_DIGITS, help="chiffres décimaux")
    common.add_argument("--terms", type=int, default=Config.FOURIER_TERMS, help="taille de la table A(n)")
    common.add_argument("--mmax", type=int, default=Config.ASYMPTOTIC_M_MAX, help="borne M_max du modèle r(m)")
    common.add_argument("--window", default=Config.RESIDUAL_WINDOW, help="fenêtre N1:N2 des résidus")
    common.add_argument("--out", default=None, help="fichier de sortie")
    common.add_argument("--format", default="json", choices=OUTPUT_FORMATS, help="format de sortie")
    common.add_argument("--seed", type=int, default=Config.RANDOM_SEED, help="graine des tirages aléatoires")
    common.add_argument("--oracle", action="store_true", help="eval: écart à la quadrature directe; verify: points d'oracle supplémentaires")

    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common], help="évaluer I₂(f)")
    p_eval.add_argument("--f", required=True, help="module f (chaîne décimale, f ≠ -1)")

    p_verify = sub.add_parser("verify", parents=[common], help="lancer une suite de vérification")
    p_verify.add_argument("--suite", default="all", choices=SUITES)

    p_coeffs = sub.add_parser("coeffs", parents=[common], help="exporter une table de coefficients")
    p_coeffs.add_argument("--kind", required=True, choices=COEFF_KINDS)
    p_coeffs.add_argument("--count", type=int, required=True)

    sub.add_parser("config", help="afficher la configuration")
    return parser


def _run_config(args, suite: str = "all") -> RunConfig:
    return RunConfig(
        precision_digits=args.prec,
        terms=args.terms,
        output_format=args.format,
        suite=suite,
        seed=args.seed,
        m_max=args.mmax,
        window=args.window,
        oracle=args.oracle,
    )


def _emit(text: str, out: str = None):
    """Écrit le résultat sur la sortie standard, ou dans --out si fourni."""
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n", encoding="utf8")
        logger.info(f"✓ Résultat écrit: {path}")
    else:
        print(text)


def cmd_eval(args) -> int:
    cfg = _run_config(args)
    ctx = Config.default_context(cfg.precision_digits)
    trace = reduce_f(args.f, ctx)
    value = i2_eval(args.f, ctx)
    result = {
        "f": args.f,
        "digits": cfg.precision_digits,
        "I2": mp.nstr(value, cfg.precision_digits),
        "trace": [
            {"kind": step.kind, "f_before": mp.nstr(step.f_before, 20), "f_after": mp.nstr(step.f_after, 20)}
            for step in trace.steps
        ],
        "final_f": mp.nstr(trace.final_f, 20),
    }

    if cfg.oracle:
        digits = min(cfg.precision_digits, Config.ORACLE_MAX_DIGITS)
        if abs(trace.input_f) < 1:
            with mp.workdps(digits + 10):
                delta = abs(value - i2_quadrature(args.f, digits))
            result["oracle_delta"] = mp.nstr(delta, 5)
        else:
            logger.warning("⚠ Oracle ignoré: la quadrature demande |f| < 1")

    if cfg.output_format == "json":
        _emit(json.dumps(result, indent=2, ensure_ascii=False), args.out)
    elif cfg.output_format == "csv":
        _emit(pd.DataFrame([{k: v for k, v in result.items() if k != "trace"}]).to_csv(index=False).strip(), args.out)
    else:
        lines = [f"I₂({args.f}) = {result['I2']}"]
        lines += [f"  {s['kind']}: {s['f_before']} → {s['f_after']}" for s in result["trace"]]
        if "oracle_delta" in result:
            lines.append(f"  écart à la quadrature: {result['oracle_delta']}")
        _emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _run_config(args, suite=args.suite)
    report = run_suite(cfg)

    out = args.out or str(Config.get_output_path() / f"{cfg.suite}.json")
    if cfg.output_format == "csv":
        frame = pd.DataFrame([item.model_dump() for item in report.items])
        export_table(frame, out, fmt="csv")
    else:
        write_report(report, out)

    if cfg.output_format == "text":
        print(report.as_text())
    else:
        print(json.dumps({"suite": report.suite, "passed": report.passed, "report": out}, ensure_ascii=False))

    if not report.passed:
        logger.error(f"✗ Premier échec: {report.first_failure.name} ({report.first_failure.detail})")
        return EXIT_FAILED
    return EXIT_OK


def cmd_coeffs(args) -> int:
    cfg = _run_config(args)
    frame = coefficient_table(args.kind, args.count, Config.default_context(cfg.precision_digits))
    if args.out and cfg.output_format in ("csv", "json"):
        export_table(frame, args.out, fmt=cfg.output_format, metadata={"kind": args.kind, "count": args.count})
    elif cfg.output_format == "csv":
        _emit(frame.to_csv(index=False).strip(), args.out)
    elif cfg.output_format == "json":
        _emit(frame.to_json(orient="records", force_ascii=False, indent=2), args.out)
    else:
        _emit(frame.to_string(index=False), args.out)
    return EXIT_OK


def main(argv=None) -> int:
    """
    Analyse les arguments et exécute la commande.

    Returns:
        int: code de sortie (0, 1 ou 2)
    """
    logging.basicConfig(
        level=getattr(logging, Config.LOG_LEVEL),
        format=Config.LOG_FORMAT,
        stream=sys.stderr,
    )
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "config":
        Config.display_config()
        return EXIT_OK

    commands = {"eval": cmd_eval, "verify": cmd_verify, "coeffs": cmd_coeffs}
    try:
        return commands[args.command](args)
    except (MagAgmError, ValidationError, ValueError) as e:
        logger.error(f"✗ {type(e).__name__}: {e}")
        return EXIT_USAGE


# Point d'entrée principal du script
if __name__ == "__main__":
    sys.exit(main())
