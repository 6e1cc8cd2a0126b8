import json
import logging
import os
from typing import Dict, List

import pandas as pd

from framedcurves.graphs import GraphSnapshot

logger = logging.getLogger(__name__)


class ExportService:
    def __init__(self, output_dir: str):
        self.output_dir = output_dir

    def _path(self, name: str) -> str:
        os.makedirs(self.output_dir, exist_ok=True)
        return os.path.join(self.output_dir, name)

    def write_json(self, name: str, record: Dict) -> str:
        """Sorted keys and a trailing newline, so identical runs give identical bytes."""
        path = self._path(name)
        with open(path, "w") as handle:
            json.dump(record, handle, sort_keys=True, indent=2)
            handle.write("\n")
        logger.info(f"Wrote {path}")
        return path

    def write_snapshot(self, snapshot: GraphSnapshot, stem: str) -> List[str]:
        """JSON, DOT and distance CSV for one snapshot."""
        record = snapshot.to_dict()
        record["graph"] = record.pop("kind")
        record["kind"] = "snapshot"
        paths = [self.write_json(f"{stem}.json", record)]
        dot_path = self._path(f"{stem}.dot")
        with open(dot_path, "w") as handle:
            handle.write(snapshot.to_dot())
        paths.append(dot_path)
        paths.append(self.write_table(snapshot.distance_table(), f"{stem}_distances.csv"))
        return paths

    def write_table(self, table: pd.DataFrame, name: str) -> str:
        path = self._path(name)
        table.to_csv(path, index=False)
        logger.info(f"Wrote {path} ({len(table)} rows)")
        return path
