"""Independent naive reference implementations used as test oracles.

Everything here is deliberately written from the definitions, without
touching the package's vectorized or incremental code paths.
"""

from collections import Counter

import numpy as np

PEPTIDE_HYDRO = set("AVILMFWC")
PEPTIDE_POSITIVE = set("KRH")
PEPTIDE_NEGATIVE = set("DE")


def naive_sat_violation(clauses, assignment) -> int:
    """Clause-by-clause recount; assignment is a 0/1 sequence."""
    violated = 0
    for clause in clauses:
        satisfied = False
        for lit in clause:
            value = assignment[abs(lit) - 1]
            if (value == 1) == (lit > 0):
                satisfied = True
                break
        if not satisfied:
            violated += 1
    return violated


def naive_sudoku_violation(grid) -> int:
    """Per-unit duplicate recount; grid holds digits 1..side."""
    grid = [list(row) for row in grid]
    side = len(grid)
    box = int(round(side ** 0.5))
    units = []
    units += [list(row) for row in grid]
    units += [[grid[r][c] for r in range(side)] for c in range(side)]
    for br in range(0, side, box):
        for bc in range(0, side, box):
            units.append([grid[r][c]
                          for r in range(br, br + box)
                          for c in range(bc, bc + box)])
    total = 0
    for unit in units:
        for count in Counter(unit).values():
            total += max(0, count - 1)
    return total


def naive_peptide_report(residues: str, min_len=10, max_len=50,
                         charge_lo=2, charge_hi=9, hydro_min=0.30):
    """(length, charge, hydrophobicity) violations from plain string counts."""
    n = len(residues)
    nu_len = max(0, min_len - n) + max(0, n - max_len)
    charge = sum(1 for r in residues if r in PEPTIDE_POSITIVE)
    charge -= sum(1 for r in residues if r in PEPTIDE_NEGATIVE)
    nu_charge = max(0, charge_lo - charge) + max(0, charge - charge_hi)
    fraction = (sum(1 for r in residues if r in PEPTIDE_HYDRO) / n) if n else 0.0
    nu_hydro = max(0.0, hydro_min - fraction)
    return (float(nu_len), float(nu_charge), float(nu_hydro))


def enumerate_posterior(support, weights, observed, num_tokens) -> np.ndarray:
    """Brute-force conditional marginals; ``observed`` maps pos -> token."""
    support = np.asarray(support)
    length = support.shape[1]
    rows = np.zeros((length, num_tokens))
    total = 0.0
    for seq, w in zip(support, weights):
        if all(seq[pos] == tok for pos, tok in observed.items()):
            total += w
            for i, tok in enumerate(seq):
                rows[i, tok] += w
    if total == 0.0:
        return None
    return rows / total


def tv_distance(counts: dict, probs: dict, n: int) -> float:
    keys = set(counts) | set(probs)
    return 0.5 * sum(abs(counts.get(k, 0) / n - probs.get(k, 0.0)) for k in keys)
