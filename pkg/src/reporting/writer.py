# src/reporting/writer.py
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Mapping, Optional, TextIO

import numpy as np
import pandas as pd

from config.settings import RUN_SETTINGS
from src import __version__
from src.core.covers import ScaledCover
from src.core.metric_space import FiniteMetricSpace
from src.exactness.partition_of_unity import PartitionOfUnity

logger = logging.getLogger(__name__)


def provenance_line(command: str, details: Mapping[str, Any]) -> str:
    """``# coarsekit <version> <command> key=value ...`` with keys in insertion order."""
    parts = [f"# coarsekit {__version__}", command]
    parts.extend(f"{key}={value}" for key, value in details.items())
    return ' '.join(parts)


def _json_number(value: float):
    if math.isinf(value):
        return 'inf'
    return int(value) if float(value).is_integer() else float(value)


def _json_label(label):
    if isinstance(label, frozenset):
        return sorted(label)
    if isinstance(label, tuple):
        return [_json_label(part) for part in label]
    if isinstance(label, (np.integer, np.floating)):
        return label.item()
    return label


def frame_to_records(frame: pd.DataFrame) -> list:
    """Rows as dicts with JSON-safe values; ∞ as ``"inf"``."""
    records = []
    for row in frame.to_dict(orient='records'):
        clean = {}
        for key, value in row.items():
            if isinstance(value, (bool, np.bool_)):
                clean[key] = bool(value)
            elif isinstance(value, (int, float, np.integer, np.floating)):
                clean[key] = _json_number(float(value))
            else:
                clean[key] = _json_label(value)
        records.append(clean)
    return records


def space_to_json(space: FiniteMetricSpace) -> dict:
    """Explicit-metric JSON, ∞ written as ``"inf"``."""
    data = {
        'type': 'explicit',
        'name': space.name,
        'labels': [_json_label(l) for l in space.labels],
        'dist': [[_json_number(v) for v in row] for row in space.dist],
    }
    if space.basepoint is not None:
        data['basepoint'] = space.basepoint
    return data


def cover_to_json(cover: ScaledCover) -> dict:
    return {
        'scale': None if cover.scale is None else _json_number(cover.scale),
        'mesh': _json_number(cover.mesh),
        'blocks': [list(b) for b in cover.blocks],
    }


def pou_to_json(pou: PartitionOfUnity) -> dict:
    return {
        'vertices': [_json_label(v) for v in pou.vertices],
        'rows': [[[v, w] for v, w in pou.row(x)] for x in range(len(pou))],
    }


def elements_to_json(group, elements) -> list:
    """Group elements in the group's own JSON encoding, as group and hom files read them."""
    return [group.element_to_json(x) for x in elements]


class ReportWriter:
    """
    Writes result tables and JSON artifacts with a provenance header.

    Attributes:
        output (Path, optional): Destination file; stdout when None.
        float_format (str): printf-style format for CSV floats.
    """

    def __init__(self, output: Optional[Path] = None, float_format: str = None):
        self.output = Path(output) if output else None
        self.float_format = float_format or RUN_SETTINGS['float_format']
        self._sections = []

    def add_table(self, title: str, frame: pd.DataFrame) -> None:
        """Queue a titled CSV section."""
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, float_format=self.float_format, lineterminator='\n')
        self._sections.append(f"# {title}\n{buffer.getvalue()}")

    def add_records(self, title: str, frame: pd.DataFrame) -> None:
        """Queue a table as a JSON array of row objects."""
        self.add_json(title, frame_to_records(frame))

    def add_json(self, title: str, payload: Any) -> None:
        self._sections.append(f"# {title}\n{json.dumps(payload, sort_keys=False)}\n")

    def render(self, header: str) -> str:
        return header + '\n' + ''.join(self._sections)

    def write(self, header: str, stream: TextIO = None) -> str:
        """Write every queued section after ``header``; returns the text written."""
        text = self.render(header)
        if self.output is not None:
            self.output.parent.mkdir(parents=True, exist_ok=True)
            with open(self.output, 'w') as file:
                file.write(text)
            logger.info(f"Wrote {len(self._sections)} sections to {self.output}")
        else:
            (stream or sys.stdout).write(text)
        return text
