"""Reference values for welch_fixtures.tsv (mpmath, 60 digits).

Each row describes two 0/1 samples by size and number of ones.
Run: python3 welch_reference.py > welch_fixtures.tsv
"""
import random

from mpmath import mp, mpf, sqrt, betainc

mp.dps = 60


def welch(na, ka, nb, kb):
    ma, mb = mpf(ka) / na, mpf(kb) / nb
    va = (ka * (1 - ma) ** 2 + (na - ka) * ma ** 2) / (na - 1)
    vb = (kb * (1 - mb) ** 2 + (nb - kb) * mb ** 2) / (nb - 1)
    sa, sb = va / na, vb / nb
    t = (ma - mb) / sqrt(sa + sb)
    df = (sa + sb) ** 2 / (sa ** 2 / (na - 1) + sb ** 2 / (nb - 1))
    p = betainc(df / 2, mpf(1) / 2, 0, df / (df + t * t), regularized=True)
    return t, df, p


rng = random.Random(20201116)
rows = [(4, 3, 6, 0), (5, 4, 5, 0), (2, 1, 2, 1), (10, 9, 10, 1), (638, 500, 466, 250)]
while len(rows) < 50:
    na, nb = rng.randint(2, 400), rng.randint(2, 400)
    ka, kb = rng.randint(0, na), rng.randint(0, nb)
    if (ka in (0, na)) and (kb in (0, nb)):
        continue
    rows.append((na, ka, nb, kb))

print("n_a\tones_a\tn_b\tones_b\tt\tdf\tp")
for na, ka, nb, kb in rows:
    t, df, p = welch(na, ka, nb, kb)
    print(f"{na}\t{ka}\t{nb}\t{kb}\t{mp.nstr(t, 25)}\t{mp.nstr(df, 25)}\t{mp.nstr(p, 25)}")
