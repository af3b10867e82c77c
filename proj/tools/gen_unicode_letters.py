#!/usr/bin/env python3
"""Regenerate src/unicode_letters.inc: sorted, merged code point ranges of
the Unicode general categories Lu, Ll, Lt, Lm, Lo."""
import sys
import unicodedata

def main() -> None:
    ranges = []
    start = None
    for cp in range(0x110000):
        is_letter = unicodedata.category(chr(cp)).startswith("L")
        if is_letter and start is None:
            start = cp
        elif not is_letter and start is not None:
            ranges.append((start, cp - 1))
            start = None
    if start is not None:
        ranges.append((start, 0x10FFFF))
    out = sys.stdout
    out.write(f"// Generated by tools/gen_unicode_letters.py (Unicode {unicodedata.unidata_version}).\n")
    out.write("// Letter ranges (general category L*), inclusive, sorted.\n")
    for lo, hi in ranges:
        out.write(f"{{0x{lo:04X}, 0x{hi:04X}}},\n")

if __name__ == "__main__":
    main()
