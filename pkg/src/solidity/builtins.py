"""Names with built-in meaning in Solidity"""

# globals and functions a user declaration must not shadow
SHADOWABLE = frozenset(
    ["require", "assert", "revert", "msg", "block", "tx", "now", "selfdestruct"]
)

# further names reserved for generated code
RESERVED = SHADOWABLE | frozenset(
    ["this", "super", "keccak256", "sha256", "gasleft", "blockhash", "abi", "suicide"]
)

LOW_LEVEL_CALLS = frozenset(["call", "callcode", "delegatecall", "send"])

ADDRESS_MEMBERS = frozenset(
    ["transfer", "send", "balance", "call", "callcode", "delegatecall", "staticcall", "code", "codehash"]
)

# `.value(x)` / `.gas(x)` wrap a low-level call in 0.5 syntax
CALL_OPTIONS = frozenset(["value", "gas"])

GLOBAL_MEMBERS = {
    "tx": frozenset(["origin", "gasprice"]),
    "msg": frozenset(["sender", "value", "data", "sig", "gas"]),
    "block": frozenset(["timestamp", "number", "coinbase", "difficulty", "gaslimit", "chainid", "basefee"]),
}

CALL_HEADS = frozenset(["require", "assert", "revert", "selfdestruct", "keccak256"])
