"""Versioned prompt templates, stored as package data so live runs are auditable."""

from importlib import resources


def load_prompt(name: str) -> str:
    return (resources.files("kgsemcom") / "data" / "prompts" / name).read_text(encoding="utf-8")
