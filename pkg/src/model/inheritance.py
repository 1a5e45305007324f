"""Inheritance resolution with Solidity's C3 linearization.

Solidity lists bases from "most base-like" to "most derived", so the merge walks the
parent list right to left: for ``contract D is B, C`` the result starts ``D, C, B``.
"""
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

from src.model.errors import CycleError, LinearizationError, UnknownContract
from src.model.types import ContractDecl, FunctionSig, SystemModel

ParentsOf = Callable[[str], Optional[Sequence[str]]]


def _merge(contract: str, sequences: List[List[str]]) -> List[str]:
    result = []
    seqs = [list(seq) for seq in sequences if seq]
    while seqs:
        for seq in seqs:
            candidate = seq[0]
            if not any(candidate in other[1:] for other in seqs):
                break
        else:
            raise LinearizationError(contract, seqs)
        result.append(candidate)
        for seq in seqs:
            if seq[0] == candidate:
                del seq[0]
        seqs = [seq for seq in seqs if seq]
    return result


def _check_acyclic(name: str, parents_of: ParentsOf) -> None:
    visiting: List[str] = []
    done = set()

    def visit(node: str) -> None:
        if node in done:
            return
        if node in visiting:
            raise CycleError(visiting[visiting.index(node):] + [node])
        parents = parents_of(node)
        if parents is None:
            raise UnknownContract(node)
        visiting.append(node)
        for parent in parents:
            visit(parent)
        visiting.pop()
        done.add(node)

    visit(name)


def c3_linearize(name: str, parents_of: ParentsOf) -> List[str]:
    """Linearize ``name`` given a lookup returning declared parents (None if unknown).

    Raises:
        UnknownContract: a name in the hierarchy is not declared
        CycleError: the hierarchy contains a cycle
        LinearizationError: the C3 merge fails
    """
    _check_acyclic(name, parents_of)
    memo: Dict[str, List[str]] = {}

    def lin(node: str) -> List[str]:
        if node not in memo:
            parents = list(parents_of(node) or ())
            bases = list(reversed(parents))
            memo[node] = [node] + _merge(node, [lin(p) for p in bases] + [bases])
        return memo[node]

    return list(lin(name))


def _model_parents(model: SystemModel) -> ParentsOf:
    table = {c.name: c.parents for c in model.contracts}
    return table.get


def linearize(model: SystemModel, contract: str) -> List[str]:
    """Return the C3 linearization of ``contract``, most-derived first"""
    if model.contract(contract) is None:
        raise UnknownContract(contract)
    return c3_linearize(contract, _model_parents(model))


@dataclass(frozen=True)
class InheritedFunction:
    owner: str
    signature: FunctionSig


@dataclass(frozen=True)
class Collision:
    """Two contracts in one hierarchy define a function with the same name"""

    function: str
    first: str
    second: str
    related: bool

    @property
    def pair(self) -> FrozenSet[str]:
        return frozenset((self.first, self.second))


@dataclass(frozen=True)
class EffectiveInterface:
    contract: str
    functions: Tuple[InheritedFunction, ...]
    collisions: Tuple[Collision, ...]

    def signatures(self) -> FrozenSet[FunctionSig]:
        return frozenset(f.signature for f in self.functions)

    def owner_of(self, name: str) -> Optional[str]:
        for func in self.functions:
            if func.signature.name == name:
                return func.owner
        return None


def effective_interface(model: SystemModel, contract: str) -> EffectiveInterface:
    """Own plus inherited functions; earliest definition in the linearization wins.

    Every pair of contracts in the hierarchy that define the same function name is
    recorded as a collision; ``related`` tells whether one of the two inherits from
    the other (a plain override) or not (a diamond-style clash).
    """
    order = linearize(model, contract)
    decls: Dict[str, ContractDecl] = {name: model.contract(name) for name in order}
    ancestry = {name: set(linearize(model, name)) for name in order}

    winners: Dict[str, InheritedFunction] = {}
    definers: Dict[str, List[str]] = {}
    for name in order:
        for sig in decls[name].functions:
            if sig.name not in winners:
                winners[sig.name] = InheritedFunction(name, sig)
            owners = definers.setdefault(sig.name, [])
            if name not in owners:
                owners.append(name)

    collisions = []
    for func_name, owners in definers.items():
        for i, first in enumerate(owners):
            for second in owners[i + 1:]:
                related = first in ancestry[second] or second in ancestry[first]
                collisions.append(Collision(func_name, first, second, related))

    return EffectiveInterface(contract, tuple(winners.values()), tuple(collisions))
