"""Pass/fail reports with counterexample witnesses.

Every verification routine returns a Report so suites can aggregate them and
the CLI can print one line per check with the first witness on failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Failure:
    instance: str
    law: str
    witness: str


@dataclass
class Report:
    name: str
    instances: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def tick(self, count: int = 1) -> None:
        self.instances += count

    def fail(self, instance: str, law: str, witness: str = "") -> None:
        self.failures.append(Failure(instance, law, witness))

    def check(self, ok: bool, instance: str, law: str, witness: str = "") -> bool:
        self.tick()
        if not ok:
            self.fail(instance, law, witness)
        return ok

    def absorb(self, other: "Report") -> None:
        self.instances += other.instances
        self.failures.extend(other.failures)

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "instances": self.instances,
            "failures": [
                {"instance": f.instance, "law": f.law, "witness": f.witness}
                for f in self.failures
            ],
        }

    def summary(self) -> str:
        if self.passed:
            return f"PASS {self.name} (instances={self.instances})"
        first = self.failures[0]
        return (
            f"FAIL {self.name} (instances={self.instances}, failures={len(self.failures)}) "
            f"first: [{first.instance}] {first.law}: {first.witness}"
        )

    def __str__(self):
        return self.summary()
