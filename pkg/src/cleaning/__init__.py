"""
Package cleaning - Classification des lignes et échantillons nettoyés
"""
