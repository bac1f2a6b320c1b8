#!/usr/bin/env python3
"""Writes the small synthetic level set under data/levels/.

Each game gets a few levels in its own raw character set (see data/games/)
and its own layout style, so per-game metric distributions differ. Output is
fully determined by the seeds below; rerunning rewrites identical files.
"""

import argparse
import pathlib
import random


class Level:
    def __init__(self, rows, cols, fill="-"):
        self.rows = rows
        self.cols = cols
        self.cells = [[fill] * cols for _ in range(rows)]

    def put(self, r, c, ch):
        if 0 <= r < self.rows and 0 <= c < self.cols:
            self.cells[r][c] = ch

    def get(self, r, c):
        return self.cells[r][c]

    def fill(self, r0, r1, c0, c1, ch):
        for r in range(r0, r1):
            for c in range(c0, c1):
                self.put(r, c, ch)

    def text(self):
        return "".join("".join(row) + "\n" for row in self.cells)


def smb(rng, cols):
    h = 14
    lv = Level(h, cols)
    lv.fill(h - 2, h, 0, cols, "X")
    c = 8
    while c < cols - 8:
        kind = rng.random()
        if kind < 0.25:
            width = rng.randint(2, 3)
            lv.fill(h - 2, h, c, c + width, "-")
            c += width + rng.randint(4, 8)
        elif kind < 0.45:
            top = h - 2 - rng.randint(2, 4)
            lv.put(top, c, "<")
            lv.put(top, c + 1, ">")
            lv.fill(top + 1, h - 2, c, c + 1, "[")
            lv.fill(top + 1, h - 2, c + 1, c + 2, "]")
            c += 2 + rng.randint(4, 7)
        elif kind < 0.75:
            length = rng.randint(1, 5)
            row = h - 6
            for k in range(length):
                lv.put(row, c + k, "?" if rng.random() < 0.35 else "S")
                if rng.random() < 0.3:
                    lv.put(row - 1, c + k, "o")
            if rng.random() < 0.4:
                lv.put(h - 3, c + length + 1, "E")
            c += length + rng.randint(3, 6)
        else:
            lv.put(h - 3, c, "E")
            if rng.random() < 0.5:
                lv.put(h - 3, c + 2, "E")
            c += rng.randint(4, 7)
    for k in range(4):
        lv.fill(h - 3 - k, h - 2, cols - 7 + k, cols - 6 + k, "X")
    if rng.random() < 0.5:
        lv.put(h - 4, cols // 2, "B")
        lv.put(h - 3, cols // 2, "b")
    return lv


def castlevania(rng, cols, mid_door):
    h = 12
    lv = Level(h, cols)
    lv.fill(0, 1, 0, cols, "#")
    lv.fill(h - 2, h, 0, cols, "#")
    lv.put(h - 3, 0, "D")
    lv.put(h - 3, cols - 1, "D")
    c = 5
    while c < cols - 6:
        kind = rng.random()
        if kind < 0.3:
            row = rng.randint(5, 7)
            length = rng.randint(3, 6)
            lv.fill(row, row + 1, c, c + length, "#" if rng.random() < 0.8 else "B")
            lv.fill(row, h - 2, c + length, c + length + 1, "L")
            c += length + rng.randint(3, 5)
        elif kind < 0.55:
            lv.put(rng.randint(3, 6), c, "c")
            if rng.random() < 0.3:
                lv.put(rng.randint(3, 6), c + 2, "h")
            c += rng.randint(3, 5)
        elif kind < 0.75:
            lv.put(h - 3, c, "E")
            c += rng.randint(4, 7)
        elif kind < 0.9:
            lv.fill(h - 2, h - 1, c, c + 2, "W")
            lv.fill(h - 1, h, c, c + 2, "W")
            c += rng.randint(5, 8)
        else:
            lv.put(rng.randint(4, 7), c, "M")
            lv.put(rng.randint(4, 7), c + 1, "M")
            c += rng.randint(4, 6)
    if mid_door:
        lv.put(h - 3, cols // 2, "D")
    return lv


def megaman(rng, cols):
    h = 15
    lv = Level(h, cols)
    lv.fill(h - 2, h, 0, cols, "#")
    lv.fill(0, 2, 0, cols, "#")
    c = 4
    while c < cols - 6:
        kind = rng.random()
        if kind < 0.3:
            height = rng.randint(2, 4)
            width = rng.randint(3, 6)
            lv.fill(h - 2 - height, h - 2, c, c + width, "#")
            if rng.random() < 0.5:
                lv.put(h - 3 - height, c + 1, "E")
            c += width + rng.randint(2, 4)
        elif kind < 0.5:
            row = rng.randint(6, 9)
            width = rng.randint(4, 7)
            lv.fill(row, row + 1, c, c + width, "#")
            lv.fill(row, h - 2, c - 1, c, "L")
            lv.put(row - 1, c + width - 1, "C" if rng.random() < 0.7 else "P")
            lv.fill(h - 3, h - 2, c + 1, c + width - 1, "H")
            c += width + rng.randint(3, 5)
        elif kind < 0.7:
            lv.put(h - 3, c, "E" if rng.random() < 0.7 else "T")
            c += rng.randint(3, 6)
        elif kind < 0.85:
            lv.fill(rng.randint(2, 5), rng.randint(6, 8), c, c + rng.randint(2, 4), "#")
            c += rng.randint(5, 7)
        else:
            lv.put(rng.randint(6, 9), c, "M")
            lv.put(h - 3, c + 2, "C")
            c += rng.randint(4, 6)
    lv.put(h - 3, cols - 1, "D")
    return lv


def metroid(rng, cols):
    h = 15
    lv = Level(h, cols)
    lv.fill(0, 2, 0, cols, "#")
    lv.fill(h - 3, h, 0, cols, "#")
    for c in range(cols):
        if rng.random() < 0.35:
            lv.fill(2, 2 + rng.randint(1, 3), c, c + 1, "#")
    lv.fill(h - 6, h - 3, 0, 1, "D")
    c = 4
    while c < cols - 5:
        kind = rng.random()
        if kind < 0.35:
            height = rng.randint(1, 4)
            width = rng.randint(2, 5)
            ch = "#" if rng.random() < 0.7 else "B"
            lv.fill(h - 3 - height, h - 3, c, c + width, ch)
            c += width + rng.randint(1, 3)
        elif kind < 0.5:
            width = rng.randint(2, 3)
            lv.fill(h - 3, h - 1, c, c + width, "H")
            c += width + rng.randint(3, 5)
        elif kind < 0.7:
            lv.put(h - 4, c, "E")
            c += rng.randint(3, 5)
        elif kind < 0.8:
            row = rng.randint(6, 8)
            lv.fill(row, row + 1, c, c + 4, "B")
            lv.put(row - 1, c + 2, "+")
            c += rng.randint(6, 8)
        else:
            lv.fill(2, rng.randint(5, 7), c, c + 2, "#")
            lv.put(h - 4, c + 3, "T")
            c += rng.randint(4, 6)
    return lv


def ninja_gaiden(rng, cols):
    h = 13
    lv = Level(h, cols)
    lv.fill(h - 2, h, 0, cols, "#")
    c = 6
    while c < cols - 6:
        kind = rng.random()
        if kind < 0.3:
            width = rng.randint(2, 4)
            lv.fill(h - 2, h, c, c + width, "-")
            lv.put(h - 1, c, "H")
            c += width + rng.randint(4, 7)
        elif kind < 0.55:
            row = rng.randint(5, 8)
            width = rng.randint(3, 6)
            lv.fill(row, row + 1, c, c + width, "#" if rng.random() < 0.8 else "M")
            lv.fill(row, h - 2, c + width, c + width + 1, "L")
            c += width + rng.randint(3, 5)
        elif kind < 0.75:
            lv.put(rng.randint(4, 7), c, "C")
            lv.put(h - 3, c + 2, "E")
            c += rng.randint(4, 6)
        else:
            lv.put(rng.randint(3, 6), c, "o")
            c += rng.randint(3, 5)
    return lv


def build(out_dir):
    plans = {
        "SMB": [lambda r: smb(r, 96), lambda r: smb(r, 80), lambda r: smb(r, 72)],
        "CV": [lambda r: castlevania(r, 80, False), lambda r: castlevania(r, 96, True)],
        "MM": [lambda r: megaman(r, 80), lambda r: megaman(r, 72)],
        "Met": [lambda r: metroid(r, 72), lambda r: metroid(r, 64)],
        "NG": [lambda r: ninja_gaiden(r, 72), lambda r: ninja_gaiden(r, 64)],
    }
    for game, makers in plans.items():
        game_dir = out_dir / game
        game_dir.mkdir(parents=True, exist_ok=True)
        for i, make in enumerate(makers):
            rng = random.Random(f"{game}-{i}")
            (game_dir / f"{game.lower()}-{i + 1}.txt").write_text(make(rng).text())


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    default = pathlib.Path(__file__).resolve().parents[2] / "data" / "levels"
    parser.add_argument("--out", type=pathlib.Path, default=default)
    build(parser.parse_args().out)


if __name__ == "__main__":
    main()
