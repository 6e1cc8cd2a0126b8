import logging
import os
import random
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

import yaml
from dotenv import load_dotenv

from framedcurves.errors import ArtifactError, EnumerationBoundError

logger = logging.getLogger(__name__)

# Load the .env file
load_dotenv()

log_level = os.getenv("FRAMEDCURVES_LOG_LEVEL", "INFO")
threads = int(os.getenv("FRAMEDCURVES_THREADS", "1"))
max_bound = int(os.getenv("FRAMEDCURVES_MAX_BOUND", "24"))
output_dir = os.getenv("FRAMEDCURVES_OUTPUT_DIR", "out")
seed = int(os.getenv("FRAMEDCURVES_SEED", "0"))


@dataclass
class RunConfig:
    """Everything a command needs: the surface, the framing, bounds, and where output goes."""

    g: int = 3
    n: int = 1
    signature: List[int] = field(default_factory=lambda: [-5])
    gsb_values: Optional[List[int]] = None
    certificate: Optional[str] = None
    arf: Optional[int] = None
    bound: int = 8
    divisorial_bound: int = 8
    max_bound: int = max_bound
    output_dir: str = output_dir
    seed: int = seed
    threads: int = threads

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> "RunConfig":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ArtifactError(f"unknown run settings: {', '.join(unknown)}", clause="config")
        try:
            config = cls(**known)
        except TypeError as e:
            raise ArtifactError(f"malformed run settings: {e}", clause="config") from e
        config.validate()
        return config

    @classmethod
    def from_yaml(cls, path: str, overrides: Optional[Dict] = None) -> "RunConfig":
        """Settings from a run file; non-None ``overrides`` win and are validated together with it."""
        try:
            with open(path) as handle:
                data = yaml.safe_load(handle) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ArtifactError(f"could not read run file {path}: {e}", clause="config") from e
        if not isinstance(data, dict):
            raise ArtifactError(f"run file {path} must hold a mapping", clause="config")
        data.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.from_dict(data)

    def merged(self, overrides: Dict) -> "RunConfig":
        data = self.to_dict()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig.from_dict(data)

    def validate(self) -> None:
        for name in ("g", "n", "bound", "divisorial_bound", "max_bound", "seed", "threads"):
            if not isinstance(getattr(self, name), int):
                raise ArtifactError(f"{name} must be an integer", clause="config")
        if not all(isinstance(s, int) for s in self.signature):
            raise ArtifactError("signature entries must be integers", clause="config")
        if self.n < 1:
            raise ArtifactError("framings need at least one puncture", clause="config")
        if len(self.signature) != self.n:
            raise ArtifactError(f"signature has {len(self.signature)} entries for {self.n} punctures", clause="config")
        if self.bound < 0 or self.divisorial_bound < 0:
            raise ArtifactError("bounds must be nonnegative", clause="config")
        if self.threads < 1:
            raise ArtifactError("thread count must be positive", clause="config")
        self.check_budget()

    def check_budget(self) -> None:
        """Refuse searches wider than ``max_bound`` before any enumeration starts."""
        for name in ("bound", "divisorial_bound"):
            value = getattr(self, name)
            if value > self.max_bound:
                raise EnumerationBoundError(f"{name} {value} exceeds the configured maximum {self.max_bound}", value)

    def rng(self) -> random.Random:
        return random.Random(self.seed)


def configured_level() -> int:
    level = logging.getLevelName(log_level.upper())
    if not isinstance(level, int):
        logger.warning(f"Unknown log level {log_level}; using INFO")
        return logging.INFO
    return level
