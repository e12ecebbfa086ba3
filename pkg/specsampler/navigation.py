import argparse
import sys
from typing import Optional, Sequence

from specsampler import config
from specsampler.storage import RunConfig


class ArgumentMenus:
    commands: dict[str, str] = {
        'points': 'Sampling set of one extension as CSV (index, x, kernel_norm, weight).',
        'reconstruct': 'Kernel and Lagrange series against the transform on a grid, as CSV.',
        'place': 'Boundary angle whose spectrum contains --x-star, as JSON.',
        'verify': 'Run the invariant suite; exit 1 when any group fails.',
        'sweep': 'Sampling sets of --count equally spaced extensions as CSV.',
        'diagnose': 'Limit-circle diagnostic of a Jacobi recurrence as JSON.',
        'structure': 'Structure function e, a, b and s_t on a grid as CSV.'
    }

    options: list[dict] = [
        {
            "flags": ["--model"],
            "help": "Shipped model name or path to a JSON model file",
        },
        {
            "flags": ["--state"],
            "help": "Path to a JSON state file",
        },
        {
            "flags": ["--points"],
            "help": "CSV written by the points command, used as an explicit sampling set",
        },
        {
            "flags": ["--n"],
            "type": int,
            "help": "Truncation size N of a Jacobi model",
        },
        {
            "flags": ["--tau"],
            "type": float,
            "help": "Boundary angle in [0, pi) of a Jacobi extension",
        },
        {
            "flags": ["--theta"],
            "type": float,
            "help": "Boundary phase in [0, 2pi) of an interval extension",
        },
        {
            "flags": ["--window"],
            "type": int,
            "help": "Half-width of interval sampling lattices (default: the basis cutoff)",
        },
        {
            "flags": ["--terms"],
            "type": int,
            "help": "Number of series terms, taken by increasing |x_n|",
        },
        {
            "flags": ["--grid"],
            "help": "Evaluation grid lo:hi:n[,imag], also accepted as --grid=lo:hi:n",
        },
        {
            "flags": ["--seed"],
            "type": int,
            "default": config.default_seed,
            "help": "Seed of the generator feeding randomized checks",
        },
        {
            "flags": ["--out"],
            "help": "Output path (default: standard output)",
        },
        {
            "flags": ["--tol"],
            "type": float,
            "help": "Tolerance override",
        },
        {
            "flags": ["--x-star"],
            "dest": "x_star",
            "type": float,
            "help": "Real point to place into a sampling set",
        },
        {
            "flags": ["--anchor"],
            "type": int,
            "help": "Index of the Lagrange anchor node (default: node closest to 0)",
        },
        {
            "flags": ["--count"],
            "type": int,
            "default": 8,
            "help": "Number of extensions in a sweep",
        },
        {
            "flags": ["--t"],
            "type": float,
            "default": 0.0,
            "help": "Parameter t in [0, pi) of s_t",
        },
        {
            "flags": ["--z"],
            "help": "Complex point, e.g. 1j or 0.5+2j (diagnose point, structure anchor)",
        },
        {
            "flags": ["--kmax"],
            "type": int,
            "default": config.limit_circle_kmax,
            "help": "Largest index of the limit-circle partial sums",
        },
    ]

    # string options whose values may start with a minus sign
    dash_values: tuple[str, ...] = ('--grid', '--z')

    @classmethod
    def build_parser(cls) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(prog='specsampler', description=config.intro.strip())
        parser.add_argument('command', choices=list(cls.commands),
                            help='; '.join(f'{name}: {text}' for name, text in cls.commands.items()))
        for option in cls.options:
            kwargs = {key: value for key, value in option.items() if key != 'flags'}
            parser.add_argument(*option['flags'], **kwargs)
        return parser

    @classmethod
    def join_dash_values(cls, argv: Sequence[str]) -> list[str]:
        """
        Rewrites ``--grid -2:2:5`` as ``--grid=-2:2:5``, which argparse would otherwise read as two options.
        """
        joined, pending = [], None
        for arg in argv:
            if pending is not None:
                joined.append(f'{pending}={arg}')
                pending = None
            elif arg in cls.dash_values:
                pending = arg
            else:
                joined.append(arg)
        if pending is not None:
            joined.append(pending)
        return joined

    @classmethod
    def parse(cls, argv: Optional[Sequence[str]] = None) -> RunConfig:
        """
        Parses the command line into a validated RunConfig.

        Raises:
            InputValidationException: If option combinations are invalid.
            pydantic.ValidationError: If a value is out of range.
        """
        namespace = cls.build_parser().parse_args(cls.join_dash_values(sys.argv[1:] if argv is None else argv))
        return RunConfig.model_validate(vars(namespace))
