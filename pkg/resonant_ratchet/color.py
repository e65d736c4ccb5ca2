"""
Terminal colors for reports
"""


class Color:
    """
    A set of SGR codes that renders as an escape sequence.
    """

    _base_string = '\033[%sm'

    def __init__(self, *codes):
        self.codes = tuple(codes)

    def __add__(self, other):
        if isinstance(other, Color):
            return Color(*self.codes, *other.codes)
        if isinstance(other, str):
            return str(self) + other
        return NotImplemented

    def __radd__(self, other):
        if isinstance(other, str):
            return other + str(self)
        return NotImplemented

    def __str__(self):
        return self._base_string % ';'.join(str(c) for c in self.codes)

    def __repr__(self):
        return 'Color%r' % (self.codes, )


Color.RESET = Color(0)
Color.BOLD = Color(1)
Color.RED = Color(31)
Color.GREEN = Color(32)
Color.YELLOW = Color(33)
Color.GRAY = Color(90)

STATUS_COLORS = {
    'passed': Color.GREEN,
    'failed': Color.BOLD + Color.RED,
    'inapplicable': Color.YELLOW,
    'info': Color.GRAY,
}


def paint(text, color, enabled=True):
    if not enabled or color is None:
        return text
    return color + text + Color.RESET


def paint_status(status, width=0, enabled=True):
    return paint(status.ljust(width), STATUS_COLORS.get(status), enabled)
