"""False-demand attack accounting: per-customer supply loss, grid-wide
aggregate loss over the compromised set, and shortage detection."""
import json
from dataclasses import dataclass

from .errors import UnknownCustomerInSet


@dataclass(frozen=True)
class CustomerDemand:
    id: str
    true_demand: float
    reported_demand: float

    def __post_init__(self):
        if self.true_demand < 0 or self.reported_demand < 0:
            raise ValueError("demands must be non-negative")


@dataclass(frozen=True)
class AttackScenario:
    customers: tuple
    compromised: frozenset
    supply_capacity: float

    def __post_init__(self):
        object.__setattr__(self, "customers", tuple(self.customers))
        object.__setattr__(self, "compromised", frozenset(self.compromised))
        if self.supply_capacity < 0:
            raise ValueError("supply_capacity must be >= 0")
        ids = {c.id for c in self.customers}
        unknown = self.compromised - ids
        if unknown:
            raise UnknownCustomerInSet(sorted(unknown)[0])


def delta_demand(c: CustomerDemand) -> float:
    """Supply loss for one customer: reported minus true demand.

    Negative for under-reporting; the sign flows through the aggregate.
    """
    return c.reported_demand - c.true_demand


def aggregate_loss(s: AttackScenario) -> float:
    """Total supply loss over the compromised set only."""
    return float(sum(delta_demand(c) for c in s.customers if c.id in s.compromised))


def shortage_report(s: AttackScenario) -> dict:
    """Requested total vs capacity: shortfall = max(0, requested - capacity)."""
    total = float(sum(c.reported_demand for c in s.customers))
    shortfall = max(0.0, total - s.supply_capacity)
    return {
        "total_requested": total,
        "shortfall": shortfall,
        "affected": shortfall > 0.0,
    }


def scenario_from_json(doc) -> AttackScenario:
    """Parse {"capacity", "customers": [{"id", "true", "reported"}], "compromised"}."""
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    customers = tuple(
        CustomerDemand(str(c["id"]), float(c["true"]), float(c["reported"]))
        for c in doc["customers"]
    )
    return AttackScenario(
        customers=customers,
        compromised=frozenset(str(i) for i in doc.get("compromised", ())),
        supply_capacity=float(doc["capacity"]),
    )


def report_json(s: AttackScenario) -> dict:
    """Full machine-readable report: per-customer deltas, aggregate, shortage."""
    return {
        "per_customer": [
            {"id": c.id, "delta": delta_demand(c), "compromised": c.id in s.compromised}
            for c in s.customers
        ],
        "aggregate_loss": aggregate_loss(s),
        "shortage": shortage_report(s),
    }
