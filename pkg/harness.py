"""
Suite runner: turns the check registries into tasks, runs them on the
worker pool and renders the reports.
"""

import dataclasses
import json
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from config import get_settings
from errors import NotOrthomodular, UnknownSuite
from generators import task_rng
from instances import COUNTEREXAMPLE_CHECKS, LANTERN_CHECKS
from lattice import OrthoLattice, builtin
from lemmas import lattice_checks, logic_checks
from models import CheckContext, CheckReport, CheckTask
from pumping import PUMPING_CHECKS
from theorems import AUTOMATA_CHECKS, BOOLEAN_CHECKS, REGEX_CHECKS
from worker import SuiteWorker

Check = Callable[..., List[CheckReport]]

GROUPS = (
    'lattice-lemmas',
    'logic-lemmas',
    'automata-theorems',
    'regex-theorems',
    'counterexamples',
    'boolean-equalities',
    'pumping',
)

SUITES = GROUPS + ('all',)

# Groups whose generators assume an orthomodular value lattice.
NEEDS_ORTHOMODULAR = ('automata-theorems', 'regex-theorems')


class VerificationEngine:
    """Plans and runs verification suites against one lattice."""

    def __init__(self, lattice: OrthoLattice, seed: Optional[int] = None, max_len: Optional[int] = None,
                 samples: Optional[int] = None, max_pump: Optional[int] = None, impl: Optional[int] = None,
                 zero_bias: Optional[float] = None, workers: Optional[int] = None):
        """
        Initialize verification engine.

        Args:
            lattice: Lattice the general-purpose suites run on
            seed: Base seed; every task derives its own generator from it
            max_len: Longest word compared
            samples: Random instances per check
            max_pump: Largest pumping exponent
            impl: Implication used for equivalence degrees
            zero_bias: Probability that a generated value is 0
            workers: Worker threads (None = configured default)

        Omitted parameters fall back to the active settings.
        """
        settings = get_settings()
        defaults = settings.verify
        self.lattice = lattice
        self.context = CheckContext(
            seed=defaults.seed if seed is None else seed,
            max_len=defaults.max_len if max_len is None else max_len,
            samples=defaults.samples if samples is None else samples,
            max_pump=defaults.max_pump if max_pump is None else max_pump,
            zero_bias=defaults.zero_bias if zero_bias is None else zero_bias,
            impl=settings.impl if impl is None else impl,
        )
        self.workers = defaults.workers if workers is None else workers
        self.logger = logging.getLogger(self.__class__.__name__)

        self.stats = {
            'tasks': 0,
            'tasks_failed': 0,
            'reports': 0,
            'passed': 0,
            'failed': 0,
        }

    def _group_plan(self, group: str, explicit: bool) -> Tuple[OrthoLattice, CheckContext, Sequence[Check]]:
        lat, ctx = self.lattice, self.context

        if group in NEEDS_ORTHOMODULAR and not lat.is_orthomodular:
            if explicit:
                raise NotOrthomodular(f"Suite '{group}' needs an orthomodular lattice: {lat.describe_violation()}")
            self.logger.warning(f"Skipping '{group}': {lat.name} is not orthomodular")
            return lat, ctx, ()

        if group == 'lattice-lemmas':
            return lat, ctx, lattice_checks(lat)
        if group == 'logic-lemmas':
            return lat, ctx, logic_checks(lat)
        if group == 'automata-theorems':
            return lat, ctx, AUTOMATA_CHECKS
        if group == 'regex-theorems':
            return lat, ctx, REGEX_CHECKS
        if group == 'counterexamples':
            return builtin('mo2'), ctx, COUNTEREXAMPLE_CHECKS + LANTERN_CHECKS
        if group == 'boolean-equalities':
            if not lat.is_boolean:
                self.logger.warning(f"{lat.name} is not Boolean; running boolean-equalities on boolN:3")
                lat = builtin('boolN:3')
            return lat, dataclasses.replace(ctx, equalities=True), BOOLEAN_CHECKS
        if group == 'pumping':
            return lat, ctx, PUMPING_CHECKS
        raise UnknownSuite(f"Unknown suite {group!r}; expected one of {', '.join(SUITES)}")

    def plan(self, suite: str) -> List[CheckTask]:
        """
        Build the task list for a suite.

        Raises:
            UnknownSuite: If suite is not one of SUITES
            NotOrthomodular: If a suite that needs it is asked for on a non-orthomodular lattice
        """
        if suite not in SUITES:
            raise UnknownSuite(f"Unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
        groups = GROUPS if suite == 'all' else (suite,)
        tasks = []
        for group in groups:
            lat, ctx, checks = self._group_plan(group, explicit=suite != 'all')
            for index, check in enumerate(checks):
                rng = task_rng(ctx.seed, group, index)
                tasks.append(CheckTask(
                    group=group,
                    index=index,
                    run=lambda check=check, lat=lat, ctx=ctx, rng=rng: check(lat, ctx, rng),
                    lattice=lat,
                    description=f"{group}: {check.__name__} on {lat.name}",
                ))
        return tasks

    def run_suite(self, suite: str) -> List[CheckReport]:
        """
        Run a suite and return its reports sorted by check id, then index.

        Args:
            suite: One of SUITES

        Returns:
            Reports in canonical order
        """
        ctx = self.context
        self.logger.info("=" * 60)
        self.logger.info(f"Running suite '{suite}' on {self.lattice.name}")
        self.logger.info(f"seed={ctx.seed} max_len={ctx.max_len} samples={ctx.samples} "
                         f"max_pump={ctx.max_pump} impl={ctx.impl}")
        self.logger.info("=" * 60)

        tasks = self.plan(suite)
        worker = SuiteWorker(self.workers)
        reports = worker.run(tasks)

        worker_stats = worker.get_stats()
        self.stats['tasks'] += len(tasks)
        self.stats['tasks_failed'] += worker_stats['tasks_failed']
        self.stats['reports'] += len(reports)
        passed = sum(1 for r in reports if r.passed)
        self.stats['passed'] += passed
        self.stats['failed'] += len(reports) - passed

        self._log_verify_stats(reports)
        return reports

    def get_stats(self) -> Dict[str, Any]:
        """Get verification statistics."""
        return self.stats.copy()

    def _log_verify_stats(self, reports: List[CheckReport]):
        """Log the summary block of a suite run."""
        self.logger.info("\n" + "=" * 60)
        self.logger.info("VERIFICATION SUMMARY")
        self.logger.info("=" * 60)
        self.logger.info(f"Tasks: {self.stats['tasks']} run, {self.stats['tasks_failed']} raised")
        self.logger.info(f"Reports: {self.stats['passed']} passed, {self.stats['failed']} failed")
        for report in reports:
            if not report.passed:
                self.logger.warning(f"  ✗ {report.check_id}#{report.index}: {report.lhs_name} "
                                    f"{report.relation} {report.rhs_name} ({report.witness or report.detail})")
        self.logger.info("=" * 60)


def run_suite(suite: str, lattice: OrthoLattice, seed: int, max_len: int, samples: int,
              **options: Any) -> List[CheckReport]:
    """Run one suite with a fresh engine; options are passed to VerificationEngine."""
    engine = VerificationEngine(lattice, seed=seed, max_len=max_len, samples=samples, **options)
    return engine.run_suite(suite)


def all_passed(reports: Sequence[CheckReport]) -> bool:
    return all(r.passed for r in reports)


def format_json_lines(reports: Sequence[CheckReport]) -> str:
    return '\n'.join(json.dumps(r.to_dict(), sort_keys=True, ensure_ascii=False) for r in reports)


def format_table(reports: Sequence[CheckReport]) -> str:
    """Fixed-width summary table with one row per report and a closing count."""
    header = ('', 'check', '#', 'lattice', 'lhs', 'rel', 'rhs')
    rows = [
        ('ok' if r.passed else 'FAIL', r.check_id, str(r.index), r.lattice, r.lhs_name, r.relation, r.rhs_name)
        for r in reports
    ]
    widths = [max(len(row[k]) for row in [header] + rows) for k in range(len(header))]
    lines = ['  '.join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header] + rows]
    failed = [r for r in reports if not r.passed]
    for r in failed:
        lines.append(f"FAIL {r.check_id}#{r.index} [{r.instance}]: {r.witness or r.detail or ''}".rstrip())
    lines.append(f"{len(reports) - len(failed)}/{len(reports)} passed")
    return '\n'.join(lines)


def format_reports(reports: Sequence[CheckReport], fmt: str = 'json') -> str:
    if fmt == 'json':
        return format_json_lines(reports)
    if fmt == 'table':
        return format_table(reports)
    raise ValueError(f"Unknown format {fmt!r}; expected 'json' or 'table'")
