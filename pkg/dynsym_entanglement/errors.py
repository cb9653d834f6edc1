#!/usr/bin/env python3

# Exception hierarchy shared by all modules. The cli maps these onto exit codes.


class QdsysError(Exception):
    pass


class DimensionMismatchError(QdsysError, ValueError):
    pass


class ShapeError(QdsysError, ValueError):
    pass


class SiteError(QdsysError, IndexError):
    pass


class NormalizationError(QdsysError, ValueError):
    pass


class ObservableSetError(QdsysError, ValueError):
    pass


class MissingCasimirError(QdsysError):
    pass


class SloccError(QdsysError, ValueError):
    pass


class ParseError(QdsysError, ValueError):
    pass


class ParamsError(QdsysError, ValueError):
    pass


class CutoffOverflowError(QdsysError):
    pass


class NoStokesJumpError(QdsysError):
    pass
