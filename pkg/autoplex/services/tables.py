"""
Tabulated results: the Tribonacci and Fibonacci complexity tables, rate curves
and the constants sheet. Everything comes back as a pandas DataFrame; callers
choose text (to_string) or CSV.
"""

import logging
import math
from typing import List, Optional, Tuple

import pandas as pd

from autoplex.core.schemas import SearchConfig
from autoplex.models.words import constant, constant_names, infinite_prefix, kbonacci_word
from autoplex.services.constructions import tribonacci_witness, trib_critical_exponent_closed_form, upper_rate
from autoplex.services.repetitions import an_lower, rate_lower, sept6_bound
from autoplex.services.search import aminus_exact

logger = logging.getLogger(__name__)

# Multipliers as printed in the table headers
TRIB_LOWER, TRIB_UPPER = 0.313, 0.487
FIB_LOWER, FIB_UPPER = 0.276, 0.382

# A- is computed exactly up to here; one more row with slow=True
FAST_AMINUS_MAX_N = 7

_ABBREVIATE_OVER = 21

# symbols kept before and after the ellipsis in long word cells
TRIB_CELL_SPLIT = (4, 7)
FIB_CELL_SPLITS = {9: (21, 7)}
FIB_CELL_SPLIT = (4, 4)


def _word_cell(word: str, split: Tuple[int, int]) -> str:
    if len(word) <= _ABBREVIATE_OVER:
        return word
    head, tail = split
    return f"{word[:head]}...{word[-tail:]}"



def _one_decimal_bare(x: float) -> str:
    """'0', '.3', '1.4': one decimal without a leading zero."""
    if x == 0:
        return "0"
    text = f"{x:.1f}"
    return text[1:] if text.startswith("0.") else text


def _trib_upper_cell(x: float) -> str:
    if x == 0:
        return "0"
    return f"{x:.2f}" if x < 2 else f"{x:.1f}"


def _fib_upper_cell(x: float) -> str:
    return "0" if x == 0 else f"{x:.1f}"


def tribonacci_table(max_n: int = 10, slow: bool = False, cfg: Optional[SearchConfig] = None) -> pd.DataFrame:
    """Rows n = 0..max_n for T_n: length, word, .313 t_n, A_N^lower, A-, construction bound, .487 t_n."""
    aminus_top = FAST_AMINUS_MAX_N + (1 if slow else 0)
    rows = []
    for n in range(max_n + 1):
        w = kbonacci_word(3, n)
        t = len(w)
        aminus = aminus_exact(w, cfg).value if n <= aminus_top else None
        bound = tribonacci_witness(n - 3).record.value if n >= 9 else None
        rows.append(
            {
                "n": n,
                "t_n": t,
                "T_n": _word_cell(str(w), TRIB_CELL_SPLIT),
                ".313t_n": _one_decimal_bare(TRIB_LOWER * t),
                "A_N^lower": an_lower(w),
                "A^-": "" if aminus is None else str(aminus),
                "construction": "" if bound is None else str(bound),
                ".487t_n": _trib_upper_cell(TRIB_UPPER * t),
            }
        )
        logger.debug(f"Tribonacci row {n} done")
    return pd.DataFrame(rows)


def fibonacci_table(max_n: int = 10) -> pd.DataFrame:
    """Rows n = 0..max_n for F_n: length, word, .276 f_n, A_N^lower, .382 f_n."""
    rows = []
    for n in range(max_n + 1):
        w = kbonacci_word(2, n)
        f = len(w)
        rows.append(
            {
                "n": n,
                "f_n": f,
                "F_n": _word_cell(str(w), FIB_CELL_SPLITS.get(n, FIB_CELL_SPLIT)),
                ".276f_n": _one_decimal_bare(FIB_LOWER * f),
                "A_N^lower": an_lower(w),
                ".382f_n": _fib_upper_cell(FIB_UPPER * f),
            }
        )
    return pd.DataFrame(rows)


def _gamma(k: int) -> float:
    if k == 2:
        return 2 + constant("phi").value
    if k == 3:
        return constant("trib_critical_exponent").value
    # no fourth powers in any k-bonacci word
    return 4.0


def rate_curve(k: int, max_len: int = 40) -> pd.DataFrame:
    """A_N^lower(prefix)/n for prefixes of the infinite k-bonacci word, with the closed-form rates alongside."""
    gamma = _gamma(k)
    if k == 2:
        constants = {
            "lower_rate": rate_lower("fibonacci"),
            "fib_interm": upper_rate("fib_interm"),
            "fib_japan": upper_rate("fib_japan"),
        }
    elif k == 3:
        constants = {"lower_rate": rate_lower("tribonacci"), "trib_aminus": upper_rate("trib_aminus")}
    else:
        constants = {"lower_rate": rate_lower("kbonacci_generic")}

    word = infinite_prefix(k, max_len)
    rows = []
    for n in range(1, max_len + 1):
        row = {
            "n": n,
            "anlower_rate": an_lower(word[:n]) / n,
            "sept6_rate": sept6_bound(n, gamma) / n,
        }
        row.update(constants)
        rows.append(row)
    logger.info(f"Rate curve for k={k} up to length {max_len}")
    return pd.DataFrame(rows)


def constants_table() -> pd.DataFrame:
    rows: List[dict] = []
    for name in constant_names():
        c = constant(name)
        rows.append({"name": name, "value": c.value, "residual": c.residual()})
    phi = constant("phi").value
    rows.append({"name": "fibonacci_critical_exponent", "value": 2 + phi, "residual": math.nan})
    closed_form = trib_critical_exponent_closed_form()
    rows.append({"name": "trib_critical_exponent_closed_form", "value": closed_form, "residual": math.nan})
    for kind in ("fibonacci", "tribonacci", "kbonacci_generic"):
        rows.append({"name": f"lower_rate_{kind}", "value": rate_lower(kind), "residual": math.nan})
    for kind in ("fib_interm", "fib_japan", "trib_aminus"):
        rows.append({"name": f"upper_rate_{kind}", "value": upper_rate(kind), "residual": math.nan})
    return pd.DataFrame(rows)

