"""
Package MagAGM.

Ce package contient les modules de calcul de l'intégrale double
magnétique I₂(f), de la forme modulaire φ(τ) associée et des
vérifications exactes et numériques qui les relient.
"""
