"""Schrödinger bridges and jump processes driven by Lévy noise"""
