#!/usr/bin/env python3
"""Regenerates src/sobol_directions.cpp from the Joe & Kuo (2008) direction
numbers bundled with SciPy (scipy.stats._sobol_direction_numbers.npz).

Usage: python3 scripts/gen_sobol_directions.py [n_dims] > src/sobol_directions.cpp
"""
import sys

import numpy as np
import scipy.stats

NBITS = 32


def direction_numbers(n_dims: int) -> np.ndarray:
    path = scipy.stats.__path__[0] + "/_sobol_direction_numbers.npz"
    data = np.load(path)
    poly = data["poly"]
    vinit = data["vinit"]
    v = np.zeros((n_dims, NBITS), dtype=np.uint64)
    # First dimension: van der Corput, m_k = 1 for all k.
    for k in range(NBITS):
        v[0, k] = 1 << (NBITS - 1 - k)
    for d in range(1, n_dims):
        p = int(poly[d])
        s = p.bit_length() - 1
        inner = (p ^ (1 << s)) >> 1  # a_1 .. a_{s-1}, a_1 = MSB
        m = [0] * (NBITS + 1)
        for i in range(1, s + 1):
            m[i] = int(vinit[d][i - 1])
            assert m[i] % 2 == 1 and m[i] < (1 << i)
        for k in range(s + 1, NBITS + 1):
            mk = m[k - s] ^ (m[k - s] << s)
            for i in range(1, s):
                a_i = (inner >> (s - 1 - i)) & 1
                mk ^= a_i * (m[k - i] << i)
            m[k] = mk
        for k in range(1, NBITS + 1):
            v[d, k - 1] = m[k] << (NBITS - k)
    return v


def main() -> None:
    n_dims = int(sys.argv[1]) if len(sys.argv) > 1 else 640
    v = direction_numbers(n_dims)
    print("// Generated by scripts/gen_sobol_directions.py -- do not edit by hand.")
    print("// Direction numbers from Joe & Kuo (2008), as bundled with SciPy.")
    print("#include \"seqbo/sobol.hpp\"")
    print()
    print("namespace seqbo::detail {")
    print()
    print(f"const std::size_t kSobolMaxDims = {n_dims};")
    print(f"const std::uint32_t kSobolDirections[{n_dims}][32] = {{")
    for d in range(n_dims):
        row = ", ".join(f"0x{int(x):08x}u" for x in v[d])
        print(f"    {{{row}}},")
    print("};")
    print()
    print("}  // namespace seqbo::detail")


if __name__ == "__main__":
    main()
