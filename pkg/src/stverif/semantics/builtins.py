"""Discrete-time models of the standard TON timer and CTUD counter."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class BuiltinTON:
    PT: int = 0
    ET: int = 0
    Q: bool = False
    IN_prev: bool = False


@dataclass(frozen=True)
class BuiltinCTUD:
    CV: int = 0
    QU: bool = False
    QD: bool = False
    PV: int = 0
    CU_prev: bool = False
    CD_prev: bool = False


def ton_step(state: BuiltinTON, IN: bool, PT: int, t_cycle: int) -> BuiltinTON:
    """One call of an on-delay timer.

    A rising edge on IN restarts the elapsed time at 0; each later call with IN
    still high adds one cycle, saturating at PT. IN low resets the timer.
    """
    PT = max(PT, 0)
    if not IN:
        return BuiltinTON(PT, 0, False, False)
    if state.IN_prev:
        et = min(state.ET + t_cycle, PT)
    else:
        et = 0
    return BuiltinTON(PT, et, et >= PT, True)


def ctud_step(state: BuiltinCTUD, CU: bool, CD: bool, R: bool, LD: bool, PV: int,
              lo: int = 0, hi: int = 255) -> BuiltinCTUD:
    """One call of an up/down counter (IEC 61131-3 CTUD), CV kept in ``lo..hi``."""
    up = CU and not state.CU_prev
    down = CD and not state.CD_prev
    cv = state.CV
    if R:
        cv = 0
    elif LD:
        cv = PV
    elif up and down:
        pass
    elif up:
        cv = min(cv + 1, hi)
    elif down:
        cv = max(cv - 1, lo)
    cv = min(max(cv, lo), hi)
    return BuiltinCTUD(cv, cv >= PV, cv <= 0, PV, CU, CD)
