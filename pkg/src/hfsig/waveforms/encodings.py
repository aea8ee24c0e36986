"""Character encodings used by the digital modes.

Only the framing structure matters at the 340 ms window scale, but the
encodings are kept faithful where the published tables are small: varicode
for the PSK modes, ITA2/Baudot for radioteletype, the constant-ratio 7-bit
alphabet for Sitor-B, and standard Morse.
"""

from __future__ import annotations

import numpy as np

# PSK varicode (G3PLX), printable subset. No code contains "00" and every
# code starts/ends with "1"; characters are separated by "00".
VARICODE = {
    " ": "1",
    "!": "111111111",
    '"': "101011111",
    "#": "111110101",
    "$": "111011011",
    "%": "1011010101",
    "&": "1010111011",
    "'": "101111111",
    "(": "11111011",
    ")": "11110111",
    "*": "101101111",
    "+": "111011111",
    ",": "1110101",
    "-": "110101",
    ".": "1010111",
    "/": "110101111",
    "0": "10110111",
    "1": "10111101",
    "2": "11101101",
    "3": "11111111",
    "4": "101110111",
    "5": "101011011",
    "6": "101101011",
    "7": "110101101",
    "8": "110101011",
    "9": "110110111",
    ":": "11110101",
    ";": "110111101",
    "<": "111101101",
    "=": "1010101",
    ">": "111010111",
    "?": "1010101111",
    "@": "1010111101",
    "A": "1111101",
    "B": "11101011",
    "C": "10101101",
    "D": "10110101",
    "E": "1110111",
    "F": "11011011",
    "G": "11111101",
    "H": "101010101",
    "I": "1111111",
    "J": "111111101",
    "K": "101111101",
    "L": "11010111",
    "M": "10111011",
    "N": "11011101",
    "O": "10101011",
    "P": "11010101",
    "Q": "111011101",
    "R": "10101111",
    "S": "1101111",
    "T": "1101101",
    "U": "101010111",
    "V": "110110101",
    "W": "101011101",
    "X": "101110101",
    "Y": "101111011",
    "Z": "1010101101",
    "a": "1011",
    "b": "1011111",
    "c": "101111",
    "d": "101101",
    "e": "11",
    "f": "111101",
    "g": "1011011",
    "h": "101011",
    "i": "1101",
    "j": "111101011",
    "k": "10111111",
    "l": "11011",
    "m": "111011",
    "n": "1111",
    "o": "111",
    "p": "111111",
    "q": "110111111",
    "r": "10101",
    "s": "10111",
    "t": "101",
    "u": "110111",
    "v": "1111011",
    "w": "1101011",
    "x": "11011111",
    "y": "1011101",
    "z": "111010101",
}

_VARICODE_CHARS = sorted(VARICODE)

# ITA2 / Baudot, 5-bit values with the first transmitted bit in the LSB.
ITA2_LETTERS = {
    "A": 0x03, "B": 0x19, "C": 0x0E, "D": 0x09, "E": 0x01, "F": 0x0D,
    "G": 0x1A, "H": 0x14, "I": 0x06, "J": 0x0B, "K": 0x0F, "L": 0x12,
    "M": 0x1C, "N": 0x0C, "O": 0x18, "P": 0x16, "Q": 0x17, "R": 0x0A,
    "S": 0x05, "T": 0x10, "U": 0x07, "V": 0x1E, "W": 0x13, "X": 0x1D,
    "Y": 0x15, "Z": 0x11, " ": 0x04, "\r": 0x08, "\n": 0x02,
}
ITA2_FIGURES = {
    "1": 0x17, "2": 0x13, "3": 0x01, "4": 0x0A, "5": 0x10,
    "6": 0x15, "7": 0x07, "8": 0x06, "9": 0x18, "0": 0x16,
    "-": 0x03, "?": 0x19, ":": 0x0E, "(": 0x0F, ")": 0x12,
    ".": 0x1C, ",": 0x0C, "/": 0x1D, " ": 0x04,
}
ITA2_LTRS = 0x1F
ITA2_FIGS = 0x1B

# Sitor-B / Navtex constant-ratio alphabet: every 7-bit codeword carries
# exactly four mark bits, giving the 35 valid words of the standard. The
# first two are the idle signals; ITA2 values index the rest.
CCIR476_CODEWORDS = tuple(w for w in range(128) if bin(w).count("1") == 4)

MORSE = {
    "A": ".-", "B": "-...", "C": "-.-.", "D": "-..", "E": ".", "F": "..-.",
    "G": "--.", "H": "....", "I": "..", "J": ".---", "K": "-.-", "L": ".-..",
    "M": "--", "N": "-.", "O": "---", "P": ".--.", "Q": "--.-", "R": ".-.",
    "S": "...", "T": "-", "U": "..-", "V": "...-", "W": ".--", "X": "-..-",
    "Y": "-.--", "Z": "--..", "0": "-----", "1": ".----", "2": "..---",
    "3": "...--", "4": "....-", "5": ".....", "6": "-....", "7": "--...",
    "8": "---..", "9": "----.",
}


def random_text(rng, n_chars, alphabet):
    idx = rng.integers(0, len(alphabet), size=n_chars)
    return "".join(alphabet[i] for i in idx)


def random_varicode_text(rng, n_chars):
    return random_text(rng, n_chars, _VARICODE_CHARS)


def random_teleprinter_text(rng, n_chars):
    # Letters, digits and spaces, the realistic RTTY/Navtex mix.
    alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789      "
    return random_text(rng, n_chars, alphabet)


def varicode_bits(text) -> np.ndarray:
    """Varicode bit stream with the inter-character "00" separators."""
    parts = ["00"]
    for ch in text:
        parts.append(VARICODE.get(ch, VARICODE[" "]))
        parts.append("00")
    return np.frombuffer("".join(parts).encode(), dtype=np.uint8) - ord("0")


def ita2_codes(text) -> list[int]:
    """ITA2 codes for the text, inserting FIGS/LTRS shifts as needed."""
    codes = []
    in_figures = False
    for ch in text:
        ch = ch.upper()
        if ch in ITA2_LETTERS and not (in_figures and ch == " "):
            if in_figures:
                codes.append(ITA2_LTRS)
                in_figures = False
            codes.append(ITA2_LETTERS[ch])
        elif ch in ITA2_FIGURES:
            if not in_figures:
                codes.append(ITA2_FIGS)
                in_figures = True
            codes.append(ITA2_FIGURES[ch])
        else:
            codes.append(ITA2_LETTERS[" "])
    return codes


def rtty_halfbits(codes) -> np.ndarray:
    """Async start/stop framing on a half-bit grid (1 start, 5 data, 1.5 stop).

    Returns mark/space levels, two entries per bit so the 1.5-bit stop
    element stays on an integer grid.
    """
    out = []
    for code in codes:
        out += [0, 0]  # start (space)
        for b in range(5):
            bit = (code >> b) & 1
            out += [bit, bit]
        out += [1, 1, 1]  # 1.5 stop bits (mark)
    return np.array(out, dtype=np.uint8)


def ccir476_bits(codes) -> np.ndarray:
    """Sitor-B collective-broadcast stream: DX/RX character interleave.

    Each character is transmitted twice, the repetition lagging five
    characters behind, so the stream alternates new and repeated codewords.
    """
    words = [CCIR476_CODEWORDS[2 + c] for c in codes]
    idle = [CCIR476_CODEWORDS[0], CCIR476_CODEWORDS[1]]
    bits = []
    for i, w in enumerate(words):
        rx = words[i - 5] if i >= 5 else idle[i % 2]
        for word in (w, rx):
            bits.extend((word >> b) & 1 for b in range(7))
    return np.array(bits, dtype=np.uint8)


def morse_elements(text) -> list[tuple[int, int]]:
    """(on, duration_in_dots) element list for the text, including gaps."""
    out = []
    for word in text.split():
        for ch in word:
            for sym in MORSE.get(ch, ""):
                out.append((1, 1 if sym == "." else 3))
                out.append((0, 1))
            out[-1] = (0, 3)  # widen the trailing gap between characters
        out[-1] = (0, 7)  # word gap
    return out
