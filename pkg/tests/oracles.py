"""Independent reference implementations used to cross-check the engine.

Nothing here reuses the explorer: the brute-force checker simulates every
input sequence with ``run_trace`` and the random program generator writes
plain ST text.
"""

from __future__ import annotations

import itertools
import random
from typing import Dict, List, Optional, Sequence, Tuple

from stverif.semantics import run_trace


def brute_force(automaton, K: int, domains: Optional[Dict[str, Sequence]] = None) -> Dict[str, Optional[int]]:
    """For each assertion, the shortest violating sequence length (None if none).

    A cycle with a failed assumption ends that sequence; violations only count
    in cycles whose assumptions hold, and earlier cycles must all be clean.
    """
    names = automaton.cycle_vars
    domains = domains or {n: (False, True) for n in names}
    rows = [dict(zip(names, c)) for c in itertools.product(*(domains[n] for n in names))]
    first: Dict[str, Optional[int]] = {a: None for a in automaton.assertions}

    def visit(prefix: List[dict], initial):
        depth = len(prefix)
        for row in rows:
            trace = run_trace(automaton, [row], initial)
            st = trace[0]
            if st.assume_violations:
                continue
            for a in st.violations:
                if first[a] is None or depth + 1 < first[a]:
                    first[a] = depth + 1
            if depth + 1 < K:
                visit(prefix + [row], (dict(st.valuation), dict(st.timer_states)))

    visit([], None)
    return first


def ctud_reference(events: Sequence[Tuple[bool, bool, bool, bool, int]], lo: int = 0, hi: int = 255):
    """Up/down counter written directly from the IEC description."""
    cv, cu_prev, cd_prev = 0, False, False
    out = []
    for cu, cd, r, ld, pv in events:
        up = cu and not cu_prev
        down = cd and not cd_prev
        if r:
            cv = 0
        elif ld:
            cv = pv
        elif up and not down:
            cv = min(cv + 1, hi)
        elif down and not up:
            cv = max(cv - 1, lo)
        cu_prev, cd_prev = cu, cd
        out.append((cv, cv >= pv, cv <= 0))
    return out


def ton_reference(ins: Sequence[bool], pt: int, t_cycle: int):
    """On-delay timer sampled once per cycle: (Q, ET) per cycle."""
    et, prev, out = 0, False, []
    for i in ins:
        if not i:
            et = 0
        elif not prev:
            et = 0
        else:
            et = min(et + t_cycle, pt)
        prev = i
        out.append((i and et >= pt, et))
    return out


# random programs

_OPS = ("AND", "OR", "XOR")


def _rand_expr(rng: random.Random, names: Sequence[str], depth: int) -> str:
    if depth == 0 or rng.random() < 0.3:
        n = rng.choice(names)
        return f"NOT {n}" if rng.random() < 0.3 else n
    a = _rand_expr(rng, names, depth - 1)
    b = _rand_expr(rng, names, depth - 1)
    return f"({a} {rng.choice(_OPS)} {b})"


def random_program(rng: random.Random, n_inputs: int, with_timer: bool, t_cycle: int = 100) -> str:
    """A small stateful block with three assertions."""
    ins = [f"i{k}" for k in range(n_inputs)]
    state = ["s0", "s1"]
    readable = ins + state
    lines = ["FUNCTION_BLOCK rnd", "    VAR_INPUT"]
    lines += [f"        {i} : BOOL;" for i in ins]
    lines += ["    END_VAR", "    VAR", "        s0 : BOOL;", "        s1 : BOOL := TRUE;"]
    if with_timer:
        lines.append("        t : TON;")
    lines += ["    END_VAR", "BEGIN"]
    lines.append(f"    IF {_rand_expr(rng, readable, 2)} THEN")
    lines.append(f"        s0 := {_rand_expr(rng, readable, 2)};")
    lines.append("    ELSE")
    lines.append(f"        s1 := {_rand_expr(rng, readable, 1)};")
    lines.append("    END_IF;")
    if with_timer:
        pt = t_cycle * rng.randint(1, 3)
        lines.append(f"    t(IN := {_rand_expr(rng, readable, 1)}, PT := T#{pt}ms);")
        readable = readable + ["t.Q"]
    lines.append(f"    s1 := {_rand_expr(rng, readable, 2)};")
    if rng.random() < 0.3:
        lines.append(f"    //#ASSUME({_rand_expr(rng, ins, 1)}) : env;")
    lines.append(f"    //#ASSERT({_rand_expr(rng, readable, 2)}) : p1;")
    lines.append(f"    //#ASSERT(s0 OR s1 OR {_rand_expr(rng, readable, 1)}) : p2;")
    # over state only, so a violation usually needs several cycles
    lines.append(f"    //#ASSERT({_rand_expr(rng, readable[n_inputs:], 2)}) : p3;")
    lines.append("END_FUNCTION_BLOCK")
    return "\n".join(lines) + "\n"
