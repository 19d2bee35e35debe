"""Cell-by-cell reference model of the extractor.

Deliberately slow and literal: every register is a list of 63 ints and each
recursion is written out per cell. Used as the oracle for the packed code and
to produce the checked-in golden stream.
"""

N = 63


def serial_step(s, d):
    new = [0] * N
    for j in range(1, N):
        new[j] = s[j - 1]
    new[0] = s[62] ^ s[61] ^ d
    return new


def word_bits(word):
    """Injection bits d_0..d_62 for one ADC word (two's complement, LSB first)."""
    w = word & 0xFFFF
    return [(w >> j) & 1 if j < 16 else 0 for j in range(N)]


def parallel_step(s, m, word):
    d = word_bits(word)
    new_m = [s[j] for j in range(N)]
    new_s = [0] * N
    for j in range(N - 1):
        new_s[j] = m[j] ^ m[j + 1] ^ d[j]
    new_s[62] = m[62] ^ s[0]
    return new_s, new_m


def extract_bits(m):
    out = 0
    for k in range(8):
        out |= m[2 * k] << k
    return out


def extract_stream(samples, warmup=63, s=None, m=None):
    """Return the extracted bytes for a sequence of int samples."""
    s = list(s) if s is not None else [0] * N
    m = list(m) if m is not None else [0] * N
    out = bytearray()
    for i, x in enumerate(samples):
        s, m = parallel_step(s, m, int(x))
        if i >= warmup:
            out.append(extract_bits(m))
    return bytes(out)
