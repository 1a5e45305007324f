"""The published rule catalog.

Each rule records its default severity, whether it is automated or a manual review
item, the checklist row it belongs to and the security patterns it relates to. The
report groups findings by the row recorded here, so every row of both checklists is
always rendered even when no rule fired.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from src.checks.diagnostics import Diagnostic, Severity
from src.model.spans import SourceSpan
from src.model.types import PatternId


class Phase(str, Enum):
    MODEL = "model"
    DESIGN = "design"
    CODING = "coding"
    GAS = "gas"


class Classification(str, Enum):
    AUTOMATIC = "automatic"
    CONDITIONAL_MANUAL = "conditional-manual"
    UNCONDITIONAL_MANUAL = "unconditional-manual"


DESIGN_ROWS: Tuple[str, ...] = (
    "Re-entrancy",
    "Dependencies",
    "Multiple Inheritance Caution",
    "Include a fail-safe mechanism",
    "Limit the amount of ether",
    "Be careful with randomness",
    "Be careful with Timestamp",
    "Never assume that a contract has zero balance",
    "Transaction Ordering",
)

CODING_ROWS: Tuple[str, ...] = (
    "External calls",
    "Prevent overflow and underflow",
    "Beware of rounding errors",
    "Validate inputs to external and public functions",
    "Prevent unbounded loops",
    "tx.origin",
    "Fallback functions",
    "Check if built-in variables or functions were overridden",
    "Use interface type instead of the address for type safety",
    "Enforce invariants with assert()",
    "Lock pragmas to specific compiler version",
    "Fix compiler warnings",
    "Testing",
)

GAS_PATTERNS: Dict[str, str] = {
    "PD": "Proxy delegate",
    "LS": "Limit storage",
    "PK": "Pack your variables",
    "DV": "Delete variables no more needed",
    "NI": "Do not initialize variables with default values",
    "MP": "Use mappings",
    "EP": "Execution paths",
    "LE": "Limit external calls",
    "LM": "Limit modifiers",
    "UL": "Use libraries",
    "EL": "Event log",
}

Version = Tuple[int, int, int]


@dataclass(frozen=True)
class Rule:
    rule_id: str
    title: str
    severity: Severity
    phase: Phase
    classification: Classification = Classification.AUTOMATIC
    row: str = ""
    patterns: FrozenSet[PatternId] = frozenset()
    gas_pattern: str = ""
    min_version: Optional[Version] = None
    max_version: Optional[Version] = None  # exclusive
    heuristic: str = ""

    @property
    def is_manual(self) -> bool:
        return self.classification is not Classification.AUTOMATIC

    def applies_to(self, version: Optional[Version]) -> bool:
        """Version applicability; an unknown compiler version always applies"""
        if version is None:
            return True
        if self.min_version is not None and version < self.min_version:
            return False
        if self.max_version is not None and version >= self.max_version:
            return False
        return True

    def diagnostic(
        self,
        message: str,
        span: Optional[SourceSpan] = None,
        path: Optional[str] = None,
        order: Tuple[int, ...] = (),
    ) -> Diagnostic:
        return Diagnostic(
            rule_id=self.rule_id,
            severity=self.severity,
            message=message,
            span=span,
            path=path,
            checklist_ref=self.row,
            patterns=self.patterns,
            order=order,
        )


def _p(*ids: str) -> FrozenSet[PatternId]:
    return frozenset(PatternId(i) for i in ids)


_E, _W, _I, _M = Severity.ERROR, Severity.WARNING, Severity.INFO, Severity.MANUAL
_COND = Classification.CONDITIONAL_MANUAL
_UNCOND = Classification.UNCONDITIONAL_MANUAL


def _model(rule_id: str, title: str) -> Rule:
    return Rule(rule_id, title, _E, Phase.MODEL)


_RULES: List[Rule] = [
    # model well-formedness
    _model("MOD-DUP-NAME", "Declaration names are unique within the model"),
    _model("MOD-UNKNOWN-PARENT", "Inheritance parents name declared contracts or interfaces"),
    _model("MOD-DUP-PARENT", "Parent lists are duplicate-free"),
    _model("MOD-INHERITANCE", "Inheritance hierarchy is acyclic and linearizable"),
    _model("MOD-UNKNOWN-TYPE", "Association targets name declared types"),
    _model("MOD-MAPPING-KEY", "Mapping keys are elementary, enum or contract types"),
    _model("MOD-STEREOTYPE", "Contract declarations use a contract-level stereotype"),
    _model("MOD-IFACE-STATE", "Interfaces hold no state variables"),
    _model("MOD-IFACE-BODY", "Interfaces hold only function declarations"),
    _model("MOD-DUP-MEMBER", "Member names are unique within the inherited scope"),
    _model("MOD-UNKNOWN-MODIFIER", "Applied modifiers are declared in the contract or an ancestor"),
    _model("MOD-STRUCT-FIELD", "Struct field names are unique"),
    _model("MOD-ENUM-MEMBER", "Enums have unique members"),
    _model("MOD-RESERVED-NAME", "Identifiers do not reuse Solidity built-in names"),
    _model("MOD-PART-ALIAS", "Participant aliases are unique within a scenario"),
    _model("MOD-PART-CONTRACT", "Participants bind declared contracts"),
    _model("MOD-ACTOR-KIND", "Participants agree with the declared actor kind"),
    _model("MOD-MSG-ENDPOINT", "Message endpoints are declared participants"),
    _model("MOD-TRANSMSG-SOURCE", "Transactions come from external participants"),
    _model("MOD-TRANSMSG-TARGET", "Transactions target contracts"),
    _model("MOD-DIRECTMSG", "Direct messages go from contract to contract"),
    _model("MOD-FALLBACK-SELF", "Fallback calls are sent by a contract to itself"),
    _model("MOD-CALL-TARGET", "View, pure and creation messages target contracts"),
    _model("MOD-DASHED-KIND", "Dashed arrows only carry ether transfers"),
    _model("MOD-ACCOUNT-ETHERS", "Accounts only send or receive ether"),
    _model("MOD-ACTIVATION", "Contracts only send messages while activated"),
    # design-phase checklist
    Rule(
        "DC-REENTRANCY",
        "Call-back into a participant whose outgoing call is still active",
        _E,
        Phase.DESIGN,
        row="Re-entrancy",
        patterns=_p("CEI", "MU"),
    ),
    Rule(
        "DC-DEPS",
        "External contracts or libraries are used",
        _M,
        Phase.DESIGN,
        _COND,
        row="Dependencies",
        heuristic="The share of newly written code has no measurable threshold.",
    ),
    Rule(
        "DC-MI",
        "Unrelated parents define the same function",
        _W,
        Phase.DESIGN,
        row="Multiple Inheritance Caution",
    ),
    Rule(
        "DC-FAILSAFE",
        "No contract is tagged with an emergency stop or proxy pattern",
        _W,
        Phase.DESIGN,
        row="Include a fail-safe mechanism",
        patterns=_p("ES", "SB", "RL", "PD"),
    ),
    Rule(
        "DC-BALANCE",
        "Ether flows into system contracts without a balance or rate limit",
        _W,
        Phase.DESIGN,
        row="Limit the amount of ether",
        patterns=_p("RL", "BL", "WF"),
    ),
    Rule(
        "DC-PUSHPAY",
        "Ether is pushed to a beneficiary instead of being withdrawn",
        _W,
        Phase.DESIGN,
        row="Limit the amount of ether",
        patterns=_p("WF"),
        heuristic="A pull payment is recognized only when the beneficiary's transaction "
        "immediately precedes the transfer.",
    ),
    Rule(
        "DC-RANDOM",
        "Review every use of randomness",
        _M,
        Phase.DESIGN,
        _UNCOND,
        row="Be careful with randomness",
        patterns=_p("RN"),
    ),
    Rule(
        "DC-TIMESTAMP",
        "Review every use of block time",
        _M,
        Phase.DESIGN,
        _UNCOND,
        row="Be careful with Timestamp",
        patterns=_p("TC"),
    ),
    Rule(
        "DC-ZEROBAL",
        "Review invariants on contract balances",
        _M,
        Phase.DESIGN,
        _UNCOND,
        row="Never assume that a contract has zero balance",
    ),
    Rule(
        "DC-TXORDER",
        "Review sensitivity to transaction ordering",
        _M,
        Phase.DESIGN,
        _UNCOND,
        row="Transaction Ordering",
        patterns=_p("TC"),
    ),
    # coding-phase checklist
    Rule(
        "CL-TXORIGIN",
        "tx.origin used for authorization",
        _E,
        Phase.CODING,
        row="tx.origin",
    ),
    Rule(
        "CL-LOWLEVEL",
        "Unchecked low-level call result",
        _E,
        Phase.CODING,
        row="External calls",
        patterns=_p("CEI", "MU", "GC", "WF"),
    ),
    Rule(
        "CL-MULTISEND",
        "Several ether transfers in one function",
        _W,
        Phase.CODING,
        row="External calls",
        patterns=_p("WF"),
    ),
    Rule(
        "CL-OVERFLOW",
        "Unchecked integer arithmetic",
        _W,
        Phase.CODING,
        row="Prevent overflow and underflow",
        patterns=_p("MH", "GC"),
        max_version=(0, 8, 0),
    ),
    Rule(
        "CL-DIV",
        "Integer division rounds down",
        _I,
        Phase.CODING,
        row="Beware of rounding errors",
        patterns=_p("MH", "GC"),
    ),
    Rule(
        "CL-VALIDATE",
        "Public function does not check its arguments",
        _W,
        Phase.CODING,
        row="Validate inputs to external and public functions",
        patterns=_p("GC"),
        heuristic="Validation means a require() (or if/revert) whose condition mentions a "
        "parameter; suppress with // abcde:allow(CL-VALIDATE).",
    ),
    Rule(
        "CL-UNBOUNDED",
        "Loop bounded by storage data",
        _W,
        Phase.CODING,
        row="Prevent unbounded loops",
    ),
    Rule(
        "CL-FALLBACK",
        "Fallback function is not simple",
        _W,
        Phase.CODING,
        row="Fallback functions",
        patterns=_p("CEI", "MU", "GC"),
        heuristic="Counts top-level statements and looks for a msg.data check; suppress "
        "with // abcde:allow(CL-FALLBACK).",
    ),
    Rule(
        "CL-SHADOW",
        "Declaration shadows a built-in",
        _E,
        Phase.CODING,
        row="Check if built-in variables or functions were overridden",
        patterns=_p("GC"),
    ),
    Rule(
        "CL-RAWADDR",
        "Contract passed as raw address",
        _I,
        Phase.CODING,
        row="Use interface type instead of the address for type safety",
        patterns=_p("GC"),
    ),
    Rule(
        "CL-ASSERTUSE",
        "assert() used for input validation",
        _W,
        Phase.CODING,
        row="Enforce invariants with assert()",
        patterns=_p("GC"),
    ),
    Rule(
        "CL-PRAGMA",
        "Compiler version not locked",
        _W,
        Phase.CODING,
        row="Lock pragmas to specific compiler version",
    ),
    Rule(
        "CL-TIMESTAMP",
        "Block timestamp read",
        _I,
        Phase.CODING,
        row="Be careful with Timestamp",
        patterns=_p("TC"),
    ),
    Rule(
        "CL-BLOCKNUM",
        "block.number used as a clock",
        _W,
        Phase.CODING,
        row="Be careful with Timestamp",
        patterns=_p("TC"),
    ),
    Rule(
        "CL-FIXWARN",
        "Fix every compiler warning",
        _M,
        Phase.CODING,
        _UNCOND,
        row="Fix compiler warnings",
    ),
    Rule(
        "CL-COVERAGE",
        "Reach full test coverage",
        _M,
        Phase.CODING,
        _UNCOND,
        row="Testing",
    ),
    # GAS patterns
    Rule("GA-PACK", "State variables can be packed into fewer slots", _W, Phase.GAS, gas_pattern="PK"),
    Rule("GA-INIT", "Explicit initialization to the default value", _W, Phase.GAS, gas_pattern="NI"),
    Rule("GA-ARRAY", "Dynamic storage array", _I, Phase.GAS, gas_pattern="MP"),
    Rule("GA-ZEROASSIGN", "Storage reset by assignment", _I, Phase.GAS, gas_pattern="DV"),
    Rule("GA-LOOPSTORE", "Storage written inside a loop", _W, Phase.GAS, gas_pattern="LS"),
    Rule("GA-OPORDER", "Costly operand evaluated first", _I, Phase.GAS, gas_pattern="EP"),
    Rule("GA-PUBEXT", "Public function never called internally", _I, Phase.GAS, gas_pattern="LE"),
    Rule("GA-MODINLINE", "Modifier code inlined repeatedly", _I, Phase.GAS, gas_pattern="LM"),
    Rule("GA-LONGSTR", "Revert reason longer than 32 bytes", _W, Phase.GAS, gas_pattern="PK"),
    Rule("GA-BYTES32", "Short string stored as dynamic type", _I, Phase.GAS, gas_pattern="PK"),
    Rule(
        "GA-SIZE",
        "Keep deployed bytecode under the 24 KB limit",
        _M,
        Phase.GAS,
        _UNCOND,
    ),
    Rule("GA-USELIB", "Move complex logic into libraries", _M, Phase.GAS, _UNCOND, gas_pattern="UL"),
    Rule(
        "GA-EVENTLOG",
        "Serve historical data from the event log",
        _M,
        Phase.GAS,
        _UNCOND,
        gas_pattern="EL",
    ),
]

RULES: Dict[str, Rule] = {rule.rule_id: rule for rule in _RULES}


def get_rule(rule_id: str) -> Rule:
    return RULES[rule_id]


def make(rule_id: str, message: str, **kwargs) -> Diagnostic:
    return RULES[rule_id].diagnostic(message, **kwargs)


def rules_for(phase: Phase) -> List[Rule]:
    return [rule for rule in _RULES if rule.phase is phase]


def rule_ids(phase: Phase) -> FrozenSet[str]:
    return frozenset(rule.rule_id for rule in rules_for(phase))


def rows_for(phase: Phase) -> Tuple[str, ...]:
    if phase is Phase.DESIGN:
        return DESIGN_ROWS
    if phase is Phase.CODING:
        return CODING_ROWS
    raise ValueError(f"phase '{phase.value}' has no checklist")


def rules_in_row(row: str, phases: Iterable[Phase]) -> List[Rule]:
    wanted = set(phases)
    return [rule for rule in _RULES if rule.row == row and rule.phase in wanted]
