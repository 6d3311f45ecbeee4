__copyright__ = "Copyright (C) 2026 The rdmat developers"

__license__ = """
Permission is hereby granted, free of charge, to any person obtaining a copy
of this software and associated documentation files (the "Software"), to deal
in the Software without restriction, including without limitation the rights
to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
copies of the Software, and to permit persons to whom the Software is
furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in
all copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
THE SOFTWARE.
"""


__doc__ = """
.. exception:: Error
.. exception:: ParameterError
.. exception:: ShapeError
.. exception:: HermiticityViolation
.. exception:: ConvergenceFailure
.. exception:: DegenerateSample
.. exception:: InvalidPurity
.. exception:: UnsupportedParameter
.. exception:: DomainError
.. exception:: SpecError
"""

from rdmat.version import VERSION, VERSION_TEXT  # noqa: F401


class Error(RuntimeError):
    pass


class ParameterError(Error, ValueError):
    """Raised for ensemble or kicked-top parameters outside their valid range."""


class ShapeError(Error, ValueError):
    pass


class HermiticityViolation(Error, ValueError):
    pass


class ConvergenceFailure(Error):
    pass


class DegenerateSample(Error):
    """Raised when a sampled Wishart matrix has vanishing trace and cannot
    be normalized to a density matrix.
    """


class InvalidPurity(Error, ValueError):
    pass


class UnsupportedParameter(Error, ValueError):
    pass


class DomainError(Error, ValueError):
    pass


class SpecError(Error, ValueError):
    """Raised when an experiment description is inconsistent, e.g. a pair
    experiment without a second parameter set.
    """
