"""Reference Keccak-256 (Ethereum padding) vectors from pycryptodome; output: hex(input) hex(digest)."""
import sys
from Crypto.Hash import keccak
import random

def k256(b):
    h = keccak.new(digest_bits=256); h.update(b); return h.hexdigest()

rng = random.Random(20240601)
inputs = [b"", b"abc", b"The quick brown fox jumps over the lazy dog", b"\x00", b"\xff" * 32]
for n in (1, 55, 56, 64, 100, 135, 136, 137, 200, 271, 272, 273, 500, 1000, 4096):
    inputs.append(bytes(rng.randrange(256) for _ in range(n)))
with open(sys.argv[1], "w") as f:
    for b in inputs:
        f.write(f"{b.hex() or '-'} {k256(b)}\n")
