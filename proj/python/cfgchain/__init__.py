"""Error-tolerant control-flow-graph generation for partial code."""

from pathlib import Path

from ._core import (  # noqa: F401
    BlockOpener,
    Cfg,
    CfgEdge,
    CfgNode,
    Token,
    apply_inverse,
    coverage,
    emit_cfgtext,
    emit_dot,
    find_block_openers,
    fuse,
    generate_cfg,
    generate_report,
    heuristic_complete,
    inject_error,
    kb_validate,
    normalize_label,
    parse_cfgtext,
    tokenize,
    validate_cfg,
)

__all__ = [
    "BlockOpener",
    "Cfg",
    "CfgEdge",
    "CfgNode",
    "Token",
    "apply_inverse",
    "coverage",
    "default_kb_dir",
    "emit_cfgtext",
    "emit_dot",
    "find_block_openers",
    "fuse",
    "generate_cfg",
    "generate_report",
    "heuristic_complete",
    "inject_error",
    "kb_validate",
    "normalize_label",
    "parse_cfgtext",
    "tokenize",
    "validate_cfg",
]

__version__ = "0.1.0"


def default_kb_dir() -> str:
    """Path of the knowledge base bundled with an installed wheel."""
    path = Path(__file__).parent / "data" / "kb"
    if not path.is_dir():
        raise FileNotFoundError(
            "no bundled knowledge base; pass kb_dir explicitly when running "
            "from a source tree"
        )
    return str(path)
