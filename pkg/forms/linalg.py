import numpy as np

# Row reduction keeps products of two residues in int64.
_MAX_PRIME = 3037000499


def inv_modp(a, p):
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError("No inverse for 0 mod p")
    return pow(a, p - 2, p)


def row_reduce(mat, p):
    """
    Reduced row echelon form over F_p, pivoting on the first non-zero entry.

    Args:
        mat (ndarray): Integer matrix.
        p (int): Prime modulus.

    Returns:
        tuple: (reduced matrix, list of pivot columns)
    """
    if p > _MAX_PRIME:
        raise ValueError(f"prime {p} too large for int64 row reduction")
    mat = np.array(mat, dtype=np.int64) % p
    rows, cols = mat.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.flatnonzero(mat[r:, c])
        if nonzero.size == 0:
            continue
        k = r + nonzero[0]
        if k != r:
            mat[[r, k]] = mat[[k, r]]
        mat[r] = (mat[r] * inv_modp(mat[r, c], p)) % p
        factors = mat[:, c].copy()
        factors[r] = 0
        mat = (mat - np.outer(factors, mat[r])) % p
        pivots.append(c)
        r += 1
    return mat, pivots


def solve_mod_p(mat, vec, p):
    """
    Solve mat @ x = vec over F_p.

    Free variables are set to zero.

    Returns:
        ndarray or None: A solution, or None when the system is inconsistent.
    """
    mat = np.asarray(mat, dtype=np.int64)
    unknowns = mat.shape[1]
    augmented = np.column_stack([mat, np.asarray(vec, dtype=np.int64)])
    reduced, pivots = row_reduce(augmented, p)
    if unknowns in pivots:
        return None
    solution = np.zeros(unknowns, dtype=np.int64)
    for row, col in enumerate(pivots):
        solution[col] = reduced[row, unknowns]
    return solution
