"""Python bindings for the dinfra distributional semantics library."""

from ._dinfra import (
    DinfraError,
    Model,
    TermNotFoundError,
    evaluate,
    list_models,
    load,
    load_dataset,
    load_file,
    save,
    spearman,
    supported_languages,
    tokenize,
    train,
)

__all__ = [
    "DinfraError",
    "Model",
    "TermNotFoundError",
    "evaluate",
    "list_models",
    "load",
    "load_dataset",
    "load_file",
    "save",
    "spearman",
    "supported_languages",
    "tokenize",
    "train",
]
