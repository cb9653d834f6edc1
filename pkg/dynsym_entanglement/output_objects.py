#!/usr/bin/env python3

"""Plain-text report tables for the command line."""

import json

import numpy as np


def format_value(value, float_format=".10g"):
    if value is None:
        return "-"
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (float, np.floating)):
        return format(float(value), float_format)
    return str(value)


def format_cell(cell, width=16, float_format=".10g"):
    text = format_value(cell, float_format)
    spaces = max(width - len(text), 1)
    leading_spaces = spaces // 2
    return " " * leading_spaces + text + " " * (spaces - leading_spaces)


class ReportTable():
    def __init__(self, title, settings=None):
        self.title = title
        self.width = settings.getint("CellWidth", 16) if settings is not None else 16
        self.float_format = settings.get("FloatFormat", ".10g") if settings is not None else ".10g"
        self.header = None
        self.rows = []
        self.summary = []

    def set_header(self, *columns):
        self.header = columns

    def add_row(self, *cells):
        self.rows.append(cells)

    def add_summary(self, key, value):
        self.summary.append((key, value))

    def render(self):
        lines = [self.title]
        if self.header:
            line = "".join(format_cell(c, self.width) for c in self.header)
            lines += [line, "-" * len(line)]
        for row in self.rows:
            lines.append("".join(format_cell(c, self.width, self.float_format) for c in row))
        if self.rows and self.summary:
            lines.append("")
        key_width = max((len(key) for key, _ in self.summary), default=0)
        for key, value in self.summary:
            lines.append("{}  {}".format(key.ljust(key_width), format_value(value, self.float_format)))
        return "\n".join(lines)


def to_json(payload):
    def default(obj):
        if isinstance(obj, np.generic):
            return obj.item()
        raise TypeError("Cannot serialize {}".format(type(obj).__name__))
    return json.dumps(payload, indent=2, sort_keys=True, default=default)


def test():
    table = ReportTable("variance")
    table.set_header("observable", "variance")
    table.add_row("Sx", 1.0)
    table.add_summary("total", 2.0)
    table.add_summary("is_ce", True)
    print(table.render())


if (__name__ == '__main__'):
    test()
