"""JSON export of run summaries, phase tables, certificates and oracle results."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from src.utils.type_conversion import to_serializable

logger = logging.getLogger(__name__)

FORMAT_VERSION = "1.0"


def summary_document(kind: str, payload: Dict[str, Any]) -> Dict[str, Any]:
    """Wrap a payload with its format version and kind.

    No timestamp is added: identical runs must produce identical bytes.
    """
    return {"format_version": FORMAT_VERSION, "kind": kind, **to_serializable(payload)}


def export_to_json(document: Dict[str, Any], output_path: Union[str, Path]) -> None:
    """Write a document as strict JSON (non-finite floats become null).

    Args:
        document: Nested dictionary, possibly holding numpy values and enums
        output_path: Path to output JSON file
    """
    with open(output_path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(to_serializable(document), f, indent=2, allow_nan=False)
        f.write("\n")

    logger.info(f"Results exported to {output_path}")
