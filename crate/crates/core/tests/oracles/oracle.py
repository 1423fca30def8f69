"""Independent oracles for the frozen expected values in the Rust tests.

Run with `python3 oracle.py`; none of this imports or mirrors the Rust code.
"""
from fractions import Fraction
from scipy import stats, special

A, C, MASK = 25173, 13849, 0xFFFF


def short_cycle(key, n):
    state, out = key & MASK, 0
    for t in range(n):
        state = (A * state + C) & MASK
        out |= ((state >> 15) & 1) << t
    return out


print("short_cycle(0x1234, 16) =", hex(short_cycle(0x1234, 16)))
print("short_cycle(0x00a5, 8) =", hex(short_cycle(0xA5, 8)))

# pad histogram for l=8, N=4
counts = [0] * 16
for k in range(256):
    counts[short_cycle(k, 4)] += 1
print("pad histogram l=8 N=4:", counts)
tv = sum(abs(Fraction(c, 256) - Fraction(1, 16)) for c in counts) / 2
print("TV short cycle l=8 N=4:", tv, float(tv))
reach = sum(1 for c in counts if c)
print("reachable planes:", reach, "replay advantage:", 1 - Fraction(reach, 16))

print("p(4.0, dof 1) =", repr(stats.chi2.sf(4.0, 1)))
for x, k in [(0.5, 3), (10.0, 5), (3.0, 2), (250.0, 200), (1e-3, 1)]:
    print(f"p({x}, dof {k}) =", repr(stats.chi2.sf(x, k)))
print("Q(2.5, 1.5) =", repr(special.gammaincc(2.5, 1.5)))

# crafted natural payload: LSBs zero, skewed values
payload = [v for v in range(16, 80, 2) for _ in range((v % 7) + 1)]
hist = [0] * 256
for b in payload:
    hist[b] += 1
stat, dof = 0.0, -1
for u in range(128):
    tot = hist[2 * u] + hist[2 * u + 1]
    if tot == 0:
        continue
    e = tot / 2
    stat += (hist[2 * u] - e) ** 2 / e
    dof += 1
print("crafted len", len(payload), "stat", stat, "dof", dof, "p", stats.chi2.sf(stat, dof))

# replay with key_space_limit=4 against ShortCycle l=8, N=4, m0 = 0b0101
m0 = 0b0101
reach4 = {m0 ^ short_cycle(k, 4) for k in range(4)}
arm_a = Fraction(sum(1 for k in range(256) if (m0 ^ short_cycle(k, 4)) in reach4), 256)
arm_b = Fraction(len(reach4), 16)
print("replay limit 4: reach", sorted(reach4), "arm_a", arm_a, "arm_b", arm_b, "adv", abs(arm_a - arm_b))
