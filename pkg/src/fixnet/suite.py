"""
Verification suites: named identity checks with dependencies, run concurrently.

A check only runs once every check it depends on has passed; otherwise it
is marked skipped. Checks are CPU-bound, so each runs in a worker thread
under a semaphore bounding how many run at once.
"""

import asyncio
import logging
from datetime import datetime
from enum import Enum
from typing import Dict, List, Optional, Set
from uuid import uuid4

from pydantic import BaseModel, Field

from .config import Caps, resolve_caps
from .errors import ArgumentError
from .verify import IDENTITIES, VerificationReport, VerifyStatus, verify_identity

logger = logging.getLogger(__name__)


class CheckStatus(str, Enum):
    """Status of a check within a suite run."""
    PENDING = "pending"
    RUNNING = "running"
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


class SuiteStatus(str, Enum):
    """Status of a whole suite run."""
    CREATED = "created"
    RUNNING = "running"
    PASS = "pass"
    FAIL = "fail"


FINISHED = (CheckStatus.PASS, CheckStatus.FAIL, CheckStatus.SKIPPED)


class CheckDefinition(BaseModel):
    """One identity applied to one named instance."""

    id: str
    identity: str
    instance: str
    depends_on: List[str] = Field(default_factory=list)
    timeout: float = 600.0


class CheckExecution(BaseModel):
    """Runtime state of a check."""

    check_id: str
    status: CheckStatus = CheckStatus.PENDING
    start_time: Optional[datetime] = None
    end_time: Optional[datetime] = None
    report: Optional[VerificationReport] = None
    error: Optional[str] = None


class SuiteDefinition(BaseModel):
    """A set of checks and how many may run at once."""

    id: str = Field(default_factory=lambda: str(uuid4()))
    name: str
    description: str = ""
    checks: List[CheckDefinition] = Field(default_factory=list)
    max_parallel_checks: int = 4

    def get_check(self, check_id: str) -> Optional[CheckDefinition]:
        for check in self.checks:
            if check.id == check_id:
                return check
        return None

    def get_dependents(self, check_id: str) -> List[str]:
        """Checks that list ``check_id`` among their dependencies."""
        return [check.id for check in self.checks if check_id in check.depends_on]

    def validate_dependencies(self) -> bool:
        """All dependencies exist, ids are unique and there is no dependency cycle."""
        check_ids = [check.id for check in self.checks]
        if len(set(check_ids)) != len(check_ids):
            logger.error(f"Suite {self.name} has duplicate check ids")
            return False
        for check in self.checks:
            for dep in check.depends_on:
                if dep not in check_ids:
                    logger.error(f"Check {check.id} depends on non-existent check {dep}")
                    return False

        def has_cycle(check_id: str, visited: Set[str], rec_stack: Set[str]) -> bool:
            visited.add(check_id)
            rec_stack.add(check_id)
            for dep in self.get_dependents(check_id):
                if dep not in visited:
                    if has_cycle(dep, visited, rec_stack):
                        return True
                elif dep in rec_stack:
                    return True
            rec_stack.remove(check_id)
            return False

        visited: Set[str] = set()
        for check in self.checks:
            if check.id not in visited and has_cycle(check.id, visited, set()):
                logger.error(f"Cycle detected in suite {self.name} dependencies")
                return False
        return True


class SuiteExecution(BaseModel):
    """Runtime state of a suite run."""

    suite_id: str
    status: SuiteStatus = SuiteStatus.CREATED
    start_time: Optional[datetime] = None
    end_time: Optional[datetime] = None
    check_executions: Dict[str, CheckExecution] = Field(default_factory=dict)

    def get_check_execution(self, check_id: str) -> CheckExecution:
        return self.check_executions[check_id]

    def update_check_status(
        self,
        check_id: str,
        status: CheckStatus,
        report: Optional[VerificationReport] = None,
        error: Optional[str] = None,
    ) -> None:
        execution = self.check_executions.setdefault(check_id, CheckExecution(check_id=check_id))
        execution.status = status
        if report is not None:
            execution.report = report
        if error is not None:
            execution.error = error
        if status == CheckStatus.RUNNING and not execution.start_time:
            execution.start_time = datetime.now()
        elif status in FINISHED:
            execution.end_time = datetime.now()

    def counts(self) -> Dict[str, int]:
        tally = {status.value: 0 for status in FINISHED}
        for execution in self.check_executions.values():
            if execution.status in FINISHED:
                tally[execution.status.value] += 1
        return tally


_REPORT_STATUS = {
    VerifyStatus.PASS: CheckStatus.PASS,
    VerifyStatus.FAIL: CheckStatus.FAIL,
    VerifyStatus.SKIPPED: CheckStatus.SKIPPED,
}


class SuiteEngine:
    """Runs suite definitions; each check goes to a worker thread."""

    def __init__(self, caps: Optional[Caps] = None):
        self.caps = resolve_caps(caps)
        self._executions: Dict[str, SuiteExecution] = {}

    async def run_suite(self, suite: SuiteDefinition) -> SuiteExecution:
        if not suite.validate_dependencies():
            raise ArgumentError(f"invalid dependencies in suite {suite.name}")
        execution = SuiteExecution(suite_id=suite.id, status=SuiteStatus.RUNNING, start_time=datetime.now())
        for check in suite.checks:
            execution.check_executions[check.id] = CheckExecution(check_id=check.id)
        self._executions[suite.id] = execution

        semaphore = asyncio.Semaphore(suite.max_parallel_checks)
        done = {check.id: asyncio.Event() for check in suite.checks}
        await asyncio.gather(
            *(self._run_check(check, execution, semaphore, done) for check in suite.checks)
        )

        failed = [e.check_id for e in execution.check_executions.values() if e.status == CheckStatus.FAIL]
        execution.status = SuiteStatus.FAIL if failed else SuiteStatus.PASS
        execution.end_time = datetime.now()
        logger.info(f"Suite {suite.name} finished with status {execution.status.value}: {execution.counts()}")
        return execution

    async def _run_check(
        self,
        check: CheckDefinition,
        execution: SuiteExecution,
        semaphore: asyncio.Semaphore,
        done: Dict[str, asyncio.Event],
    ) -> None:
        try:
            for dep in check.depends_on:
                await done[dep].wait()
            blocked = [
                dep for dep in check.depends_on if execution.get_check_execution(dep).status != CheckStatus.PASS
            ]
            if blocked:
                execution.update_check_status(
                    check.id, CheckStatus.SKIPPED, error=f"dependencies did not pass: {blocked}"
                )
                logger.warning(f"Check {check.id} skipped, blocked by {blocked}")
                return
            async with semaphore:
                execution.update_check_status(check.id, CheckStatus.RUNNING)
                try:
                    report = await asyncio.wait_for(
                        asyncio.to_thread(verify_identity, check.identity, check.instance, self.caps),
                        timeout=check.timeout,
                    )
                    execution.update_check_status(check.id, _REPORT_STATUS[report.status], report=report)
                except asyncio.TimeoutError:
                    error = f"Check {check.id} timed out after {check.timeout}s"
                    logger.error(error)
                    execution.update_check_status(check.id, CheckStatus.FAIL, error=error)
                except Exception as e:
                    error = f"Check {check.id} raised {type(e).__name__}: {e}"
                    logger.error(error)
                    execution.update_check_status(check.id, CheckStatus.FAIL, error=error)
        finally:
            done[check.id].set()

    def get_suite_status(self, suite_id: str) -> Optional[SuiteExecution]:
        return self._executions.get(suite_id)


class SuiteBuilder:
    """Builder for suite definitions."""

    def __init__(self, name: str, description: str = ""):
        self.suite = SuiteDefinition(name=name, description=description)

    def add_check(
        self,
        check_id: str,
        identity: str,
        instance: str,
        depends_on: Optional[List[str]] = None,
        timeout: float = 600.0,
    ) -> "SuiteBuilder":
        if identity not in IDENTITIES:
            raise ArgumentError(f"unknown identity {identity!r}")
        self.suite.checks.append(
            CheckDefinition(
                id=check_id, identity=identity, instance=instance, depends_on=depends_on or [], timeout=timeout
            )
        )
        return self

    def set_max_parallel_checks(self, max_parallel: int) -> "SuiteBuilder":
        self.suite.max_parallel_checks = max_parallel
        return self

    def build(self) -> SuiteDefinition:
        if not self.suite.validate_dependencies():
            raise ArgumentError(f"invalid dependencies in suite {self.suite.name}")
        return self.suite


def bundled_suite(max_parallel: int = 4) -> SuiteDefinition:
    """Every identity on the bundled desk-scale instances."""
    builder = SuiteBuilder("bundled", "identities on the bundled instances")
    for name in ("unit-clause", "contradiction", "xor-pair"):
        builder.add_check(f"d_psi_max/{name}", "d_psi_max", name)
        builder.add_check(f"d_psi_min/{name}", "d_psi_min", name)
    for name in ("xor-pair", "forall-pair"):
        for identity in ("emajsat_max", "emajsat_min", "qsat2_max", "qsat2_min"):
            builder.add_check(f"{identity}/{name}", identity, name)
    builder.add_check("d_psi_max/tautology", "d_psi_max", "tautology")
    builder.add_check("degree_reduce/tautology", "degree_reduce", "tautology", ["d_psi_max/tautology"])
    builder.add_check("strong_connect/tautology", "strong_connect", "tautology", ["degree_reduce/tautology"])
    builder.add_check("epsilon_correction/xor-pair", "epsilon_correction", "xor-pair", ["d_psi_max/xor-pair"])
    builder.add_check("extension_bound/forall-pair", "extension_bound", "forall-pair")
    builder.add_check("succinct_max/micro-circuit", "succinct_max", "micro-circuit")
    builder.add_check("succinct_min/micro-circuit", "succinct_min", "micro-circuit", ["succinct_max/micro-circuit"])
    for name in ("positive-loop", "three-cycle"):
        builder.add_check(f"pad_max/{name}", "pad_max", name)
    for name in ("negative-loop", "positive-loop", "three-cycle"):
        builder.add_check(f"pad_min/{name}", "pad_min", name)
    for name in ("three-cycle", "fan-in-four", "zero-arc"):
        builder.add_check(f"fvs_bound/{name}", "fvs_bound", name)
        builder.add_check(f"cycle_bound/{name}", "cycle_bound", name)
    return builder.set_max_parallel_checks(max_parallel).build()
