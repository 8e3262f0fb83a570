"""
Run orchestration: validated config in, artifacts plus manifest out.

``manifest.json`` echoes the configuration and lists every check with its
outcome; it leaves out the wall time and thread count, which go to
``execution.json`` and the ExperimentRun record, so reruns of the same
configuration produce byte-identical artifacts whatever the thread count.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence
import logging
import time

from django.conf import settings

import multipoint_lab
from core.export import write_csv, write_json
from .checks import CheckList
from .forms import task_parameters

logger = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.json'
EXECUTION_NAME = 'execution.json'


@dataclass
class RunContext:
    """What a task needs: seed, threads, where to write and where to record checks"""
    command: str
    seed: int
    threads: int
    output_dir: Path
    checks: CheckList = field(default_factory=CheckList)
    artifacts: List[str] = field(default_factory=list)

    def path(self, name: str) -> Path:
        return self.output_dir / name

    def record(self, path: Path) -> Path:
        self.artifacts.append(Path(path).relative_to(self.output_dir).as_posix())
        return path

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        return self.record(write_csv(self.path(name), header, rows))

    def write_json(self, name: str, payload: Any) -> Path:
        return self.record(write_json(self.path(name), payload))


@dataclass(frozen=True)
class RunManifest:
    command: str
    config: Dict
    tool_version: str
    wall_time: float
    checks: List[Dict]
    artifacts: List[str]
    output_dir: str

    @property
    def passed(self) -> bool:
        return all(check['passed'] for check in self.checks)

    @property
    def failures(self) -> List[str]:
        return [check['name'] for check in self.checks if not check['passed']]

    def to_dict(self) -> Dict:
        """Deterministic part written to manifest.json"""
        return {
            'command': self.command,
            'config': self.config,
            'tool_version': self.tool_version,
            'checks': self.checks,
            'artifacts': self.artifacts,
            'passed': self.passed,
        }


def resolve_output_dir(command: str, requested: str = '') -> Path:
    """--out or the config file wins; otherwise MULTIPOINT_OUTPUT_DIR/<command>"""
    if requested:
        return Path(requested)
    return Path(settings.MULTIPOINT_OUTPUT_DIR) / command


def config_echo(command: str, cleaned: Dict) -> Dict:
    run_fields = {'threads', 'output_dir'}
    return {
        'command': command,
        **{name: value for name, value in cleaned.items() if name not in run_fields},
    }


def record_run(manifest: RunManifest, cleaned: Dict, threads: int) -> None:
    if not settings.MULTIPOINT_RECORD_RUNS:
        return
    from .models import ExperimentRun

    ExperimentRun.objects.create(
        command=manifest.command,
        mode=cleaned.get('mode') or '',
        config=manifest.config,
        master_seed=cleaned.get('seed', 0),
        threads=threads,
        tool_version=manifest.tool_version,
        wall_time=manifest.wall_time,
        passed=manifest.passed,
        checks=manifest.checks,
        output_dir=manifest.output_dir,
    )


def run(command: str, cleaned: Dict) -> RunManifest:
    """
    Execute ``command`` with cleaned form data and write its artifacts,
    ``manifest.json`` and ``execution.json`` into the output directory.
    """
    from .tasks import TASKS

    if command not in TASKS:
        raise KeyError(f"Unknown command {command!r}")
    started = time.perf_counter()
    threads = cleaned.get('threads') or 1
    output_dir = resolve_output_dir(command, cleaned.get('output_dir') or '')
    output_dir.mkdir(parents=True, exist_ok=True)
    context = RunContext(command=command, seed=cleaned.get('seed', 0), threads=threads,
                         output_dir=output_dir)

    logger.info(f"Running {command} with seed {context.seed} on {threads} thread(s) into {output_dir}")
    TASKS[command](task_parameters(cleaned), context)

    wall_time = time.perf_counter() - started
    manifest = RunManifest(
        command=command,
        config=config_echo(command, cleaned),
        tool_version=multipoint_lab.__version__,
        wall_time=wall_time,
        checks=context.checks.to_list(),
        artifacts=list(context.artifacts),
        output_dir=str(output_dir),
    )
    write_json(output_dir / MANIFEST_NAME, manifest.to_dict())
    write_json(output_dir / EXECUTION_NAME, {'wall_time': wall_time, 'threads': threads})
    record_run(manifest, cleaned, threads)
    logger.info(
        f"{command} finished in {wall_time:.2f}s: {len(manifest.checks)} checks, "
        f"{len(manifest.failures)} failed"
    )
    return manifest
