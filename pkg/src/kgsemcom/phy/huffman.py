"""Canonical Huffman coding over corpus character frequencies.

The table is deterministic: tree ties break on insertion order of symbols
sorted lexicographically, and codeword assignment is canonical (sorted by
code length, then symbol). A degenerate single-symbol corpus still gets a
1-bit code. Optionally the alphabet reserves an escape symbol; unknown
characters then encode as the escape codeword plus an 8-bit literal.
"""

import heapq
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .bits import Bits

_ESC = None  # sentinel symbol; sorts after all real characters


@dataclass(frozen=True)
class HuffmanTable:
    codes: dict  # symbol (str of length 1, or None for escape) -> (length, value)

    @property
    def has_escape(self) -> bool:
        return _ESC in self.codes

    def lengths(self) -> dict:
        return {sym: lv[0] for sym, lv in self.codes.items()}


def _code_lengths(freqs: dict) -> dict:
    if len(freqs) == 1:
        return {next(iter(freqs)): 1}
    order = sorted(freqs, key=lambda s: (s is _ESC, s))
    heap = [(freqs[s], i, s) for i, s in enumerate(order)]
    heapq.heapify(heap)
    tick = len(heap)
    while len(heap) > 1:
        fa, _, a = heapq.heappop(heap)
        fb, _, b = heapq.heappop(heap)
        heapq.heappush(heap, (fa + fb, tick, (a, b)))
        tick += 1
    lengths: dict = {}

    def walk(node, depth):
        if isinstance(node, tuple):
            walk(node[0], depth + 1)
            walk(node[1], depth + 1)
        else:
            lengths[node] = max(depth, 1)

    walk(heap[0][2], 0)
    return lengths


def huffman_build(corpus: str, with_escape: bool = False) -> HuffmanTable:
    if not corpus:
        raise ValueError("cannot build a code from an empty corpus")
    freqs: dict = dict(Counter(corpus))
    if with_escape:
        freqs[_ESC] = 1
    lengths = _code_lengths(freqs)
    ordered = sorted(lengths, key=lambda s: (lengths[s], s is _ESC, s if s is not _ESC else ""))
    codes: dict = {}
    code = 0
    prev_len = lengths[ordered[0]]
    for sym in ordered:
        code <<= lengths[sym] - prev_len
        prev_len = lengths[sym]
        codes[sym] = (prev_len, code)
        code += 1
    return HuffmanTable(codes=codes)


def _emit(length: int, value: int, out: list) -> None:
    for i in range(length - 1, -1, -1):
        out.append((value >> i) & 1)


def huffman_encode(text: str, table: HuffmanTable) -> Bits:
    out: list[int] = []
    for ch in text:
        entry = table.codes.get(ch)
        if entry is not None:
            _emit(entry[0], entry[1], out)
        elif table.has_escape:
            if ord(ch) > 0xFF:
                raise ValueError(f"character {ch!r} does not fit the 8-bit escape literal")
            esc_len, esc_val = table.codes[_ESC]
            _emit(esc_len, esc_val, out)
            _emit(8, ord(ch), out)
        else:
            raise ValueError(f"character {ch!r} not in code table")
    return np.array(out, dtype=np.uint8)


def huffman_decode(bits: Bits, table: HuffmanTable) -> str:
    """Greedy prefix decode. A stream that ends mid-codeword (or mid-literal)
    is truncated at the last fully decodable symbol; corruption garbles text
    but never raises."""
    decode_map = {lv: sym for sym, lv in table.codes.items()}
    max_len = max(lv[0] for lv in table.codes.values())
    missing = object()  # the escape symbol is None, so None can't mark a miss
    out: list[str] = []
    length = 0
    value = 0
    i = 0
    n = len(bits)
    while i < n:
        value = (value << 1) | int(bits[i])
        length += 1
        i += 1
        sym = decode_map.get((length, value), missing)
        if sym is not missing:
            if sym is _ESC:
                if n - i < 8:
                    break
                literal = 0
                for _ in range(8):
                    literal = (literal << 1) | int(bits[i])
                    i += 1
                out.append(chr(literal))
            else:
                out.append(sym)
            length = 0
            value = 0
        elif length > max_len:
            break  # unreachable leaf: corrupted beyond resync, stop cleanly
    return "".join(out)
