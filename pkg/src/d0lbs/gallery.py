"""Named example systems used by the tests, scripts and docs."""
from __future__ import annotations

from .core import D0LSystem, make_system

_RULES = {
    "thue_morse": (["01", "10"], "0"),
    "chacon": (["0010", "1"], "0"),
    "phi_e": (["012", "112", "102"], "0"),
    "phi_s": (["0012", "2", "012"], "0"),
    "phi_p": ({"1": "1211", "2": "311", "3": "2412", "4": "435", "5": "534"}, "1"),
    "fibonacci": (["01", "0"], "0"),
    "tribonacci": (["01", "02", "0"], "0"),
    "period_doubling": (["01", "00"], "0"),
    "rudin_shapiro": (["01", "02", "31", "32"], "0"),
    "paperfolding": (["01", "21", "03", "23"], "0"),
    # rejected by the classification step
    "pushy": (["001", "1"], "0"),
    "square_tail": (["001", "11"], "0"),
    "doubling": (["01", "11"], "0"),
    "twin_blocks": (["010", "22", "11"], "0"),
}

#: systems the full analysis accepts
ACCEPTED = ("thue_morse", "chacon", "phi_e", "phi_s", "phi_p")
#: further circular systems for property tests
EXTRA = ("fibonacci", "tribonacci", "period_doubling", "rudin_shapiro", "paperfolding")
#: systems with evidence of strong repetitiveness
REJECTED = ("pushy", "square_tail", "doubling", "twin_blocks")


def system(name: str) -> D0LSystem:
    rules, axiom = _RULES[name]
    return make_system(rules, axiom, name=name)


def names() -> list[str]:
    return list(_RULES)
