"""Why the balance loss avoids trivial partitions.

The objective -Tr(sqrt(S^T S)) has two degenerate stationary points: the
uniform assignment (every row = 1/K) and the collapsed assignment (one
cluster takes everything). This script evaluates the loss at both, at a
balanced hard partition, and exhaustively enumerates all 2^6 hard
assignments for N=6, K=2 to show the maximizers of Tr(sqrt(S^T S)) are
exactly the balanced splits.
"""
import itertools

import numpy as np

from jbgnn import jb_loss

n, k = 200, 4

balanced = np.zeros((n, k))
balanced[np.arange(n), np.arange(n) % k] = 1.0
collapsed = np.zeros((n, k))
collapsed[:, 0] = 1.0
uniform = np.full((n, k), 1.0 / k)

print(f"N={n}, K={k}")
print(f"balanced hard   {jb_loss(balanced).value:9.4f}   (-sqrt(NK) = {-np.sqrt(n * k):.4f})")
print(f"collapsed       {jb_loss(collapsed).value:9.4f}   (-sqrt(N)  = {-np.sqrt(n):.4f})")
print(f"uniform         {jb_loss(uniform).value:9.4f}   (-sqrt(N/K) = {-np.sqrt(n / k):.4f})")

# exhaustive check at N=6, K=2
best, maximizers = -np.inf, []
for bits in itertools.product([0, 1], repeat=6):
    s = np.zeros((6, 2))
    s[np.arange(6), bits] = 1.0
    t = -jb_loss(s).value
    if t > best + 1e-9:
        best, maximizers = t, [bits]
    elif abs(t - best) <= 1e-9:
        maximizers.append(bits)

print(f"\nN=6, K=2 exhaustive: max Tr(sqrt(S^T S)) = {best:.6f} (sqrt(12) = {np.sqrt(12):.6f})")
print(f"{len(maximizers)} maximizers, cluster sizes {sorted(set(tuple(sorted((sum(b), 6 - sum(b)))) for b in maximizers))}")
