"""Reference values of aw([n],k) for 3 <= n <= 25, 3 <= k <= (n+3)/2.

Known published values, embedded solely as a diff target: the table command
and the acceptance suite compare solver output against these entries cell by
cell.  Nothing in the toolkit ever reads a value from here to answer a query.
"""

from __future__ import annotations

_ROWS: dict[int, tuple[int, ...]] = {
    3: (3,),
    4: (4,),
    5: (4, 5),
    6: (4, 6),
    7: (4, 6, 7),
    8: (5, 6, 8),
    9: (4, 7, 8, 9),
    10: (5, 8, 9, 10),
    11: (5, 8, 9, 10, 11),
    12: (5, 8, 10, 11, 12),
    13: (5, 8, 11, 11, 12, 13),
    14: (5, 8, 11, 12, 13, 14),
    15: (5, 9, 11, 13, 14, 14, 15),
    16: (5, 9, 12, 13, 15, 15, 16),
    17: (5, 9, 13, 13, 15, 16, 16, 17),
    18: (5, 10, 14, 14, 16, 17, 17, 18),
    19: (5, 10, 14, 15, 17, 17, 18, 18, 19),
    20: (5, 10, 14, 16, 17, 18, 19, 19, 20),
    21: (5, 11, 14, 16, 17, 19, 20, 20, 20, 21),
    22: (6, 12, 14, 17, 18, 20, 21, 21, 21, 22),
    23: (6, 12, 14, 17, 19, 20, 21, 22, 22, 22, 23),
    24: (6, 12, 15, 18, 20, 20, 22, 23, 23, 23, 24),
    25: (6, 12, 15, 19, 21, 21, 23, 23, 24, 24, 24, 25),
}

KNOWN_AW_INTERVAL: dict[tuple[int, int], int] = {
    (n, k): v
    for n, row in _ROWS.items()
    for k, v in zip(range(3, 3 + len(row)), row)
}


def table_k_range(n: int) -> range:
    """Column range of the table for row n: 3 <= k <= (n+3)/2."""
    return range(3, (n + 3) // 2 + 1)
