"""
Module de configuration centralisé pour MagAGM.

Ce module charge les variables d'environnement depuis un fichier .env
et fournit des valeurs par défaut pour tous les paramètres de calcul:
précision, tailles des tables, échelle des vérifications, logs et sorties.

Utilisation:
    from src.config import Config

    # Accéder aux paramètres
    digits = Config.PRECISION_DIGITS
    ctx = Config.default_context()
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Charger le fichier .env s'il existe (à la racine du projet)
env_path = Path(__file__).parent.parent / ".env"
load_dotenv(dotenv_path=env_path)


class Config:
    """
    Classe de configuration centralisée.

    Toutes les variables sont chargées depuis l'environnement avec des valeurs
    par défaut adaptées à une exécution "desk scale" sur un poste de travail.
    """

    # ---- Précision ----
    # Nombre de chiffres décimaux demandés (surchargé par MAGAGM_PRECISION)
    PRECISION_DIGITS = int(os.getenv("MAGAGM_PRECISION", "50"))

    # Chiffres de garde ajoutés à la précision de travail
    GUARD_DIGITS = int(os.getenv("MAGAGM_GUARD_DIGITS", "20"))

    # Plafond de précision de l'oracle par quadrature
    ORACLE_MAX_DIGITS = 50

    # ---- Tables de coefficients ----
    # Nombre de coefficients A(n) calculés par défaut
    FOURIER_TERMS = int(os.getenv("MAGAGM_FOURIER_TERMS", "1000"))

    # Nombre de coefficients de Laurent c_n extraits par défaut
    LAURENT_N_MAX = int(os.getenv("MAGAGM_LAURENT_N_MAX", "20"))

    # c_n exacts utilisés par la règle de somme à 40 chiffres (le reste suit 8n-6)
    SUM_RULE_N_EXACT = 35

    # ---- Asymptotique ----
    # Borne supérieure des m balayés pour r(m)
    ASYMPTOTIC_M_MAX = int(os.getenv("MAGAGM_MMAX", "5000"))

    # Fenêtre en n pour l'analyse des résidus (format "N1:N2")
    RESIDUAL_WINDOW = os.getenv("MAGAGM_WINDOW", "200:400")

    # ---- Certificats ----
    # Nombre maximal de termes pour une somme en k certifiée
    CERT_MAX_TERMS = int(os.getenv("MAGAGM_CERT_MAX_TERMS", "4000"))

    # Graine des tests aléatoires (involution, certificats)
    RANDOM_SEED = int(os.getenv("MAGAGM_SEED", "20240101"))

    # ---- Logging Configuration ----
    # Niveau de log : DEBUG, INFO, WARNING, ERROR, CRITICAL
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

    # Format des logs
    LOG_FORMAT = os.getenv(
        "LOG_FORMAT",
        "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
    )

    # ---- Sorties ----
    # Répertoire des rapports et tables (relatif au dossier src/)
    OUTPUT_DIR = os.getenv("OUTPUT_DIR", "data/reports")

    # ---- Production Settings ----
    # Mode de production (désactive les barres de progression et la bannière)
    PRODUCTION_MODE = os.getenv("PRODUCTION_MODE", "false").lower() == "true"

    @classmethod
    def get_output_path(cls) -> Path:
        """
        Retourne le chemin absolu vers le répertoire des rapports.

        Returns:
            Path: Chemin absolu vers data/reports/
        """
        return Path(__file__).parent / cls.OUTPUT_DIR

    @classmethod
    def default_context(cls, digits: int = None):
        """
        Construit le contexte de précision par défaut.

        Args:
            digits (int, optional): Précision demandée. Par défaut:
                PRECISION_DIGITS

        Returns:
            PrecisionContext: contexte immuable (digits, guard)
        """
        # Import local: precision importe lui-même la configuration
        from src.precision import PrecisionContext

        return PrecisionContext(
            digits=digits if digits is not None else cls.PRECISION_DIGITS,
            guard=cls.GUARD_DIGITS,
        )

    @classmethod
    def display_config(cls):
        """
        Affiche la configuration actuelle (utile pour le debugging).
        """
        print("=" * 60)
        print("CONFIGURATION DE MAGAGM")
        print("=" * 60)
        print(f"PRECISION_DIGITS: {cls.PRECISION_DIGITS}")
        print(f"GUARD_DIGITS: {cls.GUARD_DIGITS}")
        print(f"FOURIER_TERMS: {cls.FOURIER_TERMS}")
        print(f"LAURENT_N_MAX: {cls.LAURENT_N_MAX}")
        print(f"ASYMPTOTIC_M_MAX: {cls.ASYMPTOTIC_M_MAX}")
        print(f"RESIDUAL_WINDOW: {cls.RESIDUAL_WINDOW}")
        print(f"CERT_MAX_TERMS: {cls.CERT_MAX_TERMS}")
        print(f"RANDOM_SEED: {cls.RANDOM_SEED}")
        print(f"LOG_LEVEL: {cls.LOG_LEVEL}")
        print(f"OUTPUT_DIR: {cls.get_output_path()}")
        print(f"PRODUCTION_MODE: {cls.PRODUCTION_MODE}")
        print("=" * 60)


# Exécution en tant que script pour afficher la configuration
if __name__ == "__main__":
    Config.display_config()
