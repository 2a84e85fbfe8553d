#!/usr/bin/env python3
"""Write PHYDYAS-style prototype filter coefficients (overlap factor K=4).

The filter has K*M+1 taps with zero end points:

    h[n] = 1 + 2 * sum_{k=1}^{K-1} (-1)^k H_k cos(2 pi k n / (K M)),  n = 0..K*M

Usage: gen_prototype.py M > data/phydyas_k4_mM.txt
"""
import math
import sys

H = [1.0, 0.97195983, math.sqrt(2.0) / 2.0, 0.23514695]


def prototype(m, k=4):
    length = k * m + 1
    taps = []
    for n in range(length):
        acc = H[0]
        for i in range(1, k):
            acc += 2.0 * (-1) ** i * H[i] * math.cos(2.0 * math.pi * i * n / (k * m))
        taps.append(acc)
    return taps


def main():
    m = int(sys.argv[1]) if len(sys.argv) > 1 else 32
    print(f"# PHYDYAS prototype, K=4, M={m}, {4 * m + 1} taps")
    for v in prototype(m):
        print(f"{v:.17g}")


if __name__ == "__main__":
    main()
