"""Direct arbitrary-precision evaluation of H = -(x log2 x) 2^256 with x = (2^-256)^n / Z."""
import mpmath

mpmath.mp.dps = 80

def H(n, Z):
    x = mpmath.mpf(2) ** (-256 * n) / Z
    return -x * mpmath.log(x, 2) * mpmath.mpf(2) ** 256

if __name__ == "__main__":
    for n in (1, 2, 3):
        for Z in (1, 2, 0.5, 1000):
            v = H(n, mpmath.mpf(Z))
            print(n, Z, mpmath.nstr(v, 17), mpmath.nstr(mpmath.log(v, 2), 17))
