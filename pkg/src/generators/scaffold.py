"""Solidity skeletons generated from a validated SystemModel.

Stereotypes map onto Solidity constructs: contracts, interfaces and libraries
become the matching declarations, collection stereotypes become mappings and
arrays, and model structs and enums are gathered in one ``<System>Types``
library. Every file carries a locked compiler pragma. Function stubs revert
until implemented; view and pure stubs return default values instead.
"""
import logging
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from src.model.errors import ConfigError
from src.model.typenames import (
    ArrayTypeName,
    ElementaryTypeName,
    MappingTypeName,
    TypeName,
    UserDefinedTypeName,
)
from src.model.types import (
    ContractDecl,
    ContractKind,
    EnumDecl,
    FunctionSig,
    ModifierDecl,
    Mutability,
    Param,
    StructDecl,
    SystemModel,
    Visibility,
)

logger = logging.getLogger(__name__)

INDENT = "    "
_EXACT_VERSION_RE = re.compile(r"^(\d+)\.(\d+)\.(\d+)$")
KEYWORDS = {
    ContractKind.CONTRACT: "contract",
    ContractKind.INTERFACE: "interface",
    ContractKind.LIBRARY_CONTRACT: "library",
}
NEW_SPECIAL_FUNCTIONS = (0, 6, 0)

Version = Tuple[int, int, int]


def parse_version(text: str) -> Version:
    """Parse an exact ``X.Y.Z`` compiler version.

    Raises:
        ConfigError: ranges, prefixes or partial versions
    """
    match = _EXACT_VERSION_RE.match(text.strip())
    if not match:
        raise ConfigError(f"solidity_version must be an exact X.Y.Z version, got '{text}'")
    return tuple(int(part) for part in match.groups())


@dataclass(frozen=True)
class ScaffoldConfig:
    solidity_version: Version = (0, 5, 16)
    one_file_per_contract: bool = True
    license_header: str = ""

    def __post_init__(self):
        version = self.solidity_version
        if len(version) != 3 or any(not isinstance(part, int) or part < 0 for part in version):
            raise ConfigError(f"solidity_version must be three non-negative integers, got {version!r}")

    @property
    def version_text(self) -> str:
        return ".".join(str(part) for part in self.solidity_version)


class _Emitter:
    """Renders declarations of one model with its type-qualification rules"""

    def __init__(self, model: SystemModel, config: ScaffoldConfig):
        self.model = model
        self.config = config
        self.types_library = f"{model.name}Types"
        self.structs = {s.name for s in model.structs}
        self.enums = {e.name for e in model.enums}
        self.contracts = {c.name for c in model.contracts}
        self.new_specials = config.solidity_version >= NEW_SPECIAL_FUNCTIONS

    # types -------------------------------------------------------------

    def type_text(self, type_name: TypeName, qualify: bool = True) -> str:
        if isinstance(type_name, UserDefinedTypeName):
            short = type_name.short_name
            if qualify and (short in self.structs or short in self.enums):
                return f"{self.types_library}.{short}"
            return type_name.name
        if isinstance(type_name, ArrayTypeName):
            size = "" if type_name.length is None else str(type_name.length)
            return f"{self.type_text(type_name.base, qualify)}[{size}]"
        if isinstance(type_name, MappingTypeName):
            return f"mapping({self.type_text(type_name.key, qualify)} => {self.type_text(type_name.value, qualify)})"
        return str(type_name)

    def is_struct(self, type_name: TypeName) -> bool:
        return isinstance(type_name, UserDefinedTypeName) and type_name.short_name in self.structs

    def location(self, type_name: TypeName, external: bool) -> str:
        """Data location required for a parameter of ``type_name`` ('' for value types)"""
        if isinstance(type_name, MappingTypeName):
            return "storage"
        if (
            isinstance(type_name, ArrayTypeName)
            or self.is_struct(type_name)
            or (isinstance(type_name, ElementaryTypeName) and type_name.is_dynamic)
        ):
            return "calldata" if external else "memory"
        return ""

    def param_text(self, type_name: TypeName, name: str, location: str) -> str:
        return " ".join(part for part in (self.type_text(type_name), location, name) if part)

    def default_value(self, type_name: TypeName) -> Optional[str]:
        """Literal default of ``type_name``; None for structs and arrays"""
        if isinstance(type_name, ElementaryTypeName):
            name = type_name.name
            if type_name.is_integer:
                return "0"
            if name == "bool":
                return "false"
            if name == "address":
                return "address(0)"
            if type_name.is_dynamic:
                return '""'
            return f"{name}(0)"
        if isinstance(type_name, UserDefinedTypeName):
            short = type_name.short_name
            if short in self.enums:
                return f"{self.type_text(type_name)}(0)"
            if short in self.contracts:
                return f"{type_name.name}(address(0))"
        return None

    def needs_abi_encoder_v2(self) -> bool:
        """Structs or nested dynamic arrays crossing the public ABI"""
        def crosses(type_name: TypeName) -> bool:
            if self.is_struct(type_name):
                return True
            if isinstance(type_name, ArrayTypeName):
                base = type_name.base
                if isinstance(base, ArrayTypeName) or (isinstance(base, ElementaryTypeName) and base.is_dynamic):
                    return True
                return crosses(base)
            return False

        for contract in self.model.contracts:
            for event in contract.events:
                if any(crosses(p.type_name) for p in event.params):
                    return True
            for func in contract.functions:
                if self.visibility(contract, func) not in (Visibility.PUBLIC, Visibility.EXTERNAL):
                    continue
                if any(crosses(p.type_name) for p in func.params) or any(crosses(t) for t in func.returns):
                    return True
        return False

    # members -----------------------------------------------------------

    @staticmethod
    def visibility(contract: ContractDecl, func: FunctionSig) -> Visibility:
        if contract.stereotype is ContractKind.INTERFACE:
            return Visibility.EXTERNAL
        return func.visibility

    def state_var(self, var) -> str:
        parts = [self.type_text(var.type_name)]
        if var.visibility is not Visibility.INTERNAL:
            parts.append(var.visibility.value)
        parts.append(var.name)
        return " ".join(parts) + ";"

    def event(self, event) -> str:
        params = ", ".join(self.param_text(p.type_name, p.name, "") for p in event.params)
        return f"event {event.name}({params});"

    def modifier(self, mod: ModifierDecl) -> List[str]:
        params = ", ".join(self.param_text(p.type_name, p.name, self.location(p.type_name, False)) for p in mod.params)
        lines = []
        if mod.guard is not None:
            first, *rest = mod.guard.splitlines() or [""]
            lines.append(f"// guard: {first}".rstrip())
            lines += [f"// {line}".rstrip() for line in rest]
        lines += [
            f"modifier {mod.name}({params}) {{",
            f'{INDENT}require(false, "TODO");',
            f"{INDENT}_;",
            "}",
        ]
        return lines

    def _modifier_call(self, contract: ContractDecl, name: str) -> str:
        decl = self._find_modifier(contract, name)
        if decl is None or not decl.params:
            return name
        args = [self.default_value(p.type_name) for p in decl.params]
        if any(arg is None for arg in args):
            logger.warning(f"{contract.name}: no default argument for modifier '{name}'; applied without arguments")
            return name
        return f"{name}({', '.join(args)})"

    def _find_modifier(self, contract: ContractDecl, name: str) -> Optional[ModifierDecl]:
        pending = [contract]
        seen: Set[str] = set()
        while pending:
            current = pending.pop(0)
            if current.name in seen:
                continue
            seen.add(current.name)
            for mod in current.modifiers:
                if mod.name == name:
                    return mod
            pending += [p for p in (self.model.contract(n) for n in current.parents) if p is not None]
        return None

    def _params(self, params: Sequence[Param], external: bool) -> str:
        return ", ".join(self.param_text(p.type_name, p.name, self.location(p.type_name, external)) for p in params)

    def _returns(self, returns: Sequence[TypeName]) -> str:
        return ", ".join(self.param_text(t, "", self.location(t, False)) for t in returns)

    def _stub_body(self, func: FunctionSig) -> List[str]:
        if func.name == "constructor":
            return []
        if func.mutability in (Mutability.VIEW, Mutability.PURE) and func.returns:
            lines = []
            values = []
            for index, type_name in enumerate(func.returns):
                value = self.default_value(type_name)
                if value is None:
                    local = f"ret{index}"
                    lines.append(f"{self.param_text(type_name, local, self.location(type_name, False))};")
                    value = local
                values.append(value)
            result = values[0] if len(values) == 1 else f"({', '.join(values)})"
            return lines + [f"return {result};"]
        return ['revert("not implemented");']

    def function(self, contract: ContractDecl, func: FunctionSig) -> List[str]:
        visibility = self.visibility(contract, func)
        external = visibility is Visibility.EXTERNAL
        if func.name == "constructor":
            visibility = Visibility.INTERNAL if visibility is Visibility.INTERNAL else Visibility.PUBLIC
            head = f"constructor({self._params(func.params, False)})"
        elif func.name == "fallback":
            head = "fallback()" if self.new_specials else "function()"
            visibility = Visibility.EXTERNAL
        elif func.name == "receive" and self.new_specials:
            head = "receive()"
            visibility = Visibility.EXTERNAL
        else:
            head = f"function {func.name}({self._params(func.params, external)})"
        parts = [head, visibility.value]
        if func.mutability is not Mutability.NONPAYABLE:
            parts.append(func.mutability.value)
        parts += [self._modifier_call(contract, name) for name in func.applied_modifiers]
        if func.returns:
            parts.append(f"returns ({self._returns(func.returns)})")
        signature = " ".join(parts)
        if contract.stereotype is ContractKind.INTERFACE or not func.has_body:
            return [signature + ";"]
        body = self._stub_body(func)
        return [signature + " {"] + [INDENT + line for line in body] + ["}"]

    # declarations ------------------------------------------------------

    def contract(self, decl: ContractDecl) -> List[str]:
        keyword = KEYWORDS.get(decl.stereotype, "contract")
        if (
            keyword == "contract"
            and self.new_specials
            and any(not f.has_body for f in decl.functions)
        ):
            keyword = "abstract contract"
        header = f"{keyword} {decl.name}"
        if decl.parents:
            header += f" is {', '.join(decl.parents)}"

        chunks: List[List[str]] = []
        if decl.state_vars:
            chunks.append([self.state_var(v) for v in decl.state_vars])
        if decl.events:
            chunks.append([self.event(e) for e in decl.events])
        chunks += [self.modifier(m) for m in decl.modifiers]
        chunks += [self.function(decl, f) for f in decl.functions]
        return _wrap(header, chunks)

    def types_library_lines(self) -> List[str]:
        chunks: List[List[str]] = []
        for decl in self.model.declarations:
            if isinstance(decl, StructDecl):
                fields = [f"{INDENT}{self.type_text(f.type_name, qualify=False)} {f.name};" for f in decl.fields]
                chunks.append([f"struct {decl.name} {{"] + fields + ["}"])
            elif isinstance(decl, EnumDecl):
                chunks.append([f"enum {decl.name} {{ {', '.join(decl.members)} }}"])
        return _wrap(f"library {self.types_library}", chunks)

    def referenced_contracts(self, decl: ContractDecl) -> List[str]:
        """Declared contracts and interfaces ``decl`` needs to import, parents first"""
        names = [n for n in _user_names(decl) if n in self.contracts and n != decl.name]
        return list(dict.fromkeys(list(decl.parents) + names))

    def uses_types_library(self, decl: ContractDecl) -> bool:
        return any(n in self.structs or n in self.enums for n in _user_names(decl))


def _user_names(decl: ContractDecl) -> List[str]:
    """Short names of the user-defined types in the member signatures of ``decl``"""
    used: List[TypeName] = [v.type_name for v in decl.state_vars]
    for event in decl.events:
        used += [p.type_name for p in event.params]
    for mod in decl.modifiers:
        used += [p.type_name for p in mod.params]
    for func in decl.functions:
        used += [p.type_name for p in func.params] + list(func.returns)
    names = []
    for type_name in used:
        stack = [type_name]
        while stack:
            current = stack.pop(0)
            if isinstance(current, UserDefinedTypeName):
                names.append(current.short_name)
            elif isinstance(current, ArrayTypeName):
                stack.append(current.base)
            elif isinstance(current, MappingTypeName):
                stack += [current.key, current.value]
    return names


def _wrap(header: str, chunks: List[List[str]]) -> List[str]:
    lines = [f"{header} {{"]
    for i, chunk in enumerate(chunks):
        if i:
            lines.append("")
        lines += [INDENT + line if line else line for line in chunk]
    lines.append("}")
    return lines


def _parents_first(contracts: Sequence[ContractDecl]) -> List[ContractDecl]:
    """Declaration order, except that every contract follows its parents"""
    ordered: List[ContractDecl] = []
    placed: Set[str] = set()
    known = {c.name for c in contracts}
    pending = list(contracts)
    while pending:
        for decl in pending:
            if all(p in placed or p not in known for p in decl.parents):
                break
        else:
            decl = pending[0]
        pending.remove(decl)
        ordered.append(decl)
        placed.add(decl.name)
    return ordered


def _file(config: ScaffoldConfig, v2: bool, imports: List[str], blocks: List[List[str]]) -> str:
    lines = []
    for line in config.license_header.splitlines():
        lines.append(line if line.startswith("//") else f"// {line}".rstrip())
    lines.append(f"pragma solidity {config.version_text};")
    if v2:
        lines.append("pragma experimental ABIEncoderV2;")
    if imports:
        lines.append("")
        lines += [f'import "./{name}.sol";' for name in imports]
    for block in blocks:
        lines.append("")
        lines += block
    return "\n".join(lines) + "\n"


def generate_solidity(model: SystemModel, config: Optional[ScaffoldConfig] = None) -> Dict[str, str]:
    """Generate Solidity skeleton sources for ``model``.

    Args:
        model: A model that passes ``validate_model``
        config: Compiler version, file layout and license header

    Returns:
        Mapping of relative file name (``<Name>.sol``) to source text
    """
    config = config or ScaffoldConfig()
    emitter = _Emitter(model, config)
    v2 = emitter.needs_abi_encoder_v2()
    has_types = bool(emitter.structs or emitter.enums)
    contracts = _parents_first(model.contracts)

    files: Dict[str, str] = {}
    if config.one_file_per_contract:
        if has_types:
            files[f"{emitter.types_library}.sol"] = _file(config, False, [], [emitter.types_library_lines()])
        for decl in contracts:
            imports = emitter.referenced_contracts(decl)
            if emitter.uses_types_library(decl):
                imports.insert(0, emitter.types_library)
            files[f"{decl.name}.sol"] = _file(config, v2, imports, [emitter.contract(decl)])
    else:
        blocks = [emitter.types_library_lines()] if has_types else []
        blocks += [emitter.contract(decl) for decl in contracts]
        files[f"{model.name}.sol"] = _file(config, v2, [], blocks)

    logger.info(f"scaffold for {model.name}: {len(files)} file(s), solidity {config.version_text}")
    return files
