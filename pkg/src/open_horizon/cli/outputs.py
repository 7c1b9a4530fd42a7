"""
Output Writers
==============

Every file a run writes goes through an OutputWriter, which records it for
the manifest. Outputs are deterministic: JSON with sorted keys and no
timestamps, CSV with full-precision floats and "name [unit]" headers.
"""

import hashlib
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

import numpy as np
import pandas as pd


logger = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.json'

# Units of the columns the tasks write; lengths and times in units of r0
COLUMN_UNITS: Dict[str, str] = {
    'r': 'r0',
    'g00': '1',
    'g01': '1',
    'g11': '1',
    'g00_static': '1',
    'g_rr_static': '1',
    'lambda': 'r0',
    't': 'r0',
    'p_t': '1',
    'p_r': '1',
    'null_residual': '1',
    'probe_r': 'r0',
    'phi': '1',
    'pi': '1',
    'omega': '1/r0',
    'eps': '1',
    'occupation': '1',
    'radius': 'r0',
    'final_r': 'r0',
    'max_drift': '1',
}


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as handle:
        for block in iter(lambda: handle.read(1 << 16), b''):
            digest.update(block)
    return digest.hexdigest()


def jsonable(value: Any) -> Any:
    """Plain JSON types; NaN and infinities become null."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def with_units(frame: pd.DataFrame, units: Optional[Mapping[str, str]] = None) -> pd.DataFrame:
    """Rename columns to 'name [unit]'."""
    table = dict(COLUMN_UNITS)
    if units:
        table.update(units)
    missing = [c for c in frame.columns if c not in table]
    if missing:
        raise KeyError(f"no unit declared for columns {missing}")
    return frame.rename(columns={c: f"{c} [{table[c]}]" for c in frame.columns})


class OutputWriter:
    """
    Writes the files of one run below out_dir and keeps the list for the
    manifest.

    Usage:
        writer = OutputWriter(Path('out'))
        writer.write_json('horizon.json', report.to_dict())
        writer.write_manifest()
    """

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.files: List[Path] = []

    def _target(self, name: str) -> Path:
        path = self.out_dir / name
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def _record(self, path: Path):
        if path not in self.files:
            self.files.append(path)
        logger.debug("wrote %s", path)

    def write_json(self, name: str, data: Any) -> Path:
        path = self._target(name)
        text = json.dumps(jsonable(data), indent=2, sort_keys=True, allow_nan=False)
        path.write_text(text + '\n', encoding='utf-8')
        self._record(path)
        return path

    def write_csv(self, name: str, frame: pd.DataFrame,
                  units: Optional[Mapping[str, str]] = None) -> Path:
        path = self._target(name)
        with_units(frame, units).to_csv(path, index=False, float_format='%.17g',
                                        na_rep='nan', lineterminator='\n')
        self._record(path)
        return path

    def write_manifest(self) -> Path:
        """manifest.json: every file written, relative path -> size and sha256."""
        entries = {}
        for path in sorted(self.files):
            entries[path.relative_to(self.out_dir).as_posix()] = {
                'bytes': path.stat().st_size,
                'sha256': sha256_file(path),
            }
        path = self.out_dir / MANIFEST_NAME
        text = json.dumps({'files': entries}, indent=2, sort_keys=True)
        path.write_text(text + '\n', encoding='utf-8')
        return path

    @property
    def relative_files(self) -> List[str]:
        return sorted(p.relative_to(self.out_dir).as_posix() for p in self.files)
