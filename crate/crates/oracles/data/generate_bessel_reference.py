"""Regenerates bessel_j_reference.csv with 50-digit arithmetic (mpmath)."""

import mpmath

mpmath.mp.dps = 50

ARGS = [k / 8 for k in range(1, 401)] + [0.01, 0.3, 1.7, 2.404825557695773, 7.0156, 13.3237, 31.4159, 49.9]


def main():
    with open("bessel_j_reference.csv", "w", newline="\n") as out:
        out.write("n,x,value\n")
        for n in range(0, 11):
            for x in ARGS:
                value = mpmath.besselj(n, mpmath.mpf(x))
                out.write(f"{n},{x!r},{mpmath.nstr(value, 20, min_fixed=-1, max_fixed=-1)}\n")


if __name__ == "__main__":
    main()
