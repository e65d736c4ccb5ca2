"""
CSV emission
"""

import csv
import math
import numbers

from resonant_ratchet.misc import format_real


class NonFiniteError(ValueError):
    pass


def format_cell(value):
    """
    Text of one CSV cell. None is an empty cell, reals get round-trip precision.
    """
    if value is None:
        return ''
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        if not math.isfinite(value):
            raise NonFiniteError('non-finite value %r in output' % value)
        return format_real(float(value))
    return str(value)


class CsvOutput:
    """
    CSV table preceded by `# key = value` lines describing the run.
    """

    def __init__(self, stream, columns, preamble=()):
        self.stream = stream
        self.columns = list(columns)
        self.writer = csv.writer(stream, lineterminator='\n')
        for key, value in preamble:
            stream.write('# %s = %s\n' % (key, value))
        self.writer.writerow(self.columns)

    def write(self, *cells):
        if len(cells) != len(self.columns):
            raise ValueError('expected %d cells, got %d' % (len(self.columns), len(cells)))
        self.writer.writerow([format_cell(cell) for cell in cells])

    def comment(self, text):
        self.stream.write('# %s\n' % text)
