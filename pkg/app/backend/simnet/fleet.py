from dataclasses import dataclass
from typing import Mapping, Sequence

from exceptions.customexceptions import ContractError
from learners.hypothesis import MixedStrategy
from learners.trainconfig import ModelKind


@dataclass(frozen=True, eq=False)
class Agent:
    agent_id: str
    vendor_id: str
    model: MixedStrategy
    model_kind: ModelKind

    def __post_init__(self):
        if not self.agent_id or not self.vendor_id:
            raise ContractError("agent and vendor ids must be nonempty")


@dataclass(frozen=True, eq=False)
class Fleet:
    """Vendor-owned agents; every agent belongs to exactly one vendor."""

    agents: tuple[Agent, ...]
    vendor_map: dict[str, list[str]]

    def __post_init__(self):
        ids = [agent.agent_id for agent in self.agents]
        if len(set(ids)) != len(ids):
            raise ContractError(f"duplicate agent ids in {ids}")
        if not self.vendor_map:
            raise ContractError("a fleet needs at least one vendor")
        listed = [agent_id for members in self.vendor_map.values() for agent_id in members]
        if sorted(listed) != sorted(ids):
            raise ContractError("every agent must appear in exactly one vendor's list")
        for agent in self.agents:
            if agent.agent_id not in self.vendor_map.get(agent.vendor_id, []):
                raise ContractError(f"{agent.agent_id} is not listed under its vendor {agent.vendor_id}")

    def __len__(self) -> int:
        return len(self.agents)

    def agent(self, agent_id: str) -> Agent:
        for agent in self.agents:
            if agent.agent_id == agent_id:
                return agent
        raise ContractError(f"unknown agent {agent_id}")


def build_fleet(
    models: Sequence[tuple[ModelKind, MixedStrategy]], vendor_assignment: Mapping[str, Sequence[int]]
) -> Fleet:
    """
    Wraps trained models as agents ``agent-1 .. agent-N`` (in model order).

    Args:
        models: ``(model_kind, strategy)`` pairs
        vendor_assignment: Vendor id to the indices (into ``models``) of the models it owns

    Raises:
        ContractError: If there are no models, a model is owned by two vendors or by none,
            or an index is out of range.
    """
    if not models:
        raise ContractError("a fleet needs at least one model")
    owner: dict[int, str] = {}
    for vendor_id, indices in vendor_assignment.items():
        for index in indices:
            if not 0 <= index < len(models):
                raise ContractError(f"vendor {vendor_id} owns unknown model index {index}")
            if index in owner:
                raise ContractError(f"model {index} assigned to both {owner[index]} and {vendor_id}")
            owner[index] = vendor_id
    unassigned = sorted(set(range(len(models))) - set(owner))
    if unassigned:
        raise ContractError(f"models {unassigned} have no vendor")

    agents = tuple(
        Agent(agent_id=f"agent-{k + 1}", vendor_id=owner[k], model=model, model_kind=kind)
        for k, (kind, model) in enumerate(models)
    )
    vendor_map = {
        vendor_id: [f"agent-{index + 1}" for index in sorted(indices)] for vendor_id, indices in vendor_assignment.items()
    }
    return Fleet(agents=agents, vendor_map=vendor_map)
