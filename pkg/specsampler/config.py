import json
import logging.config
import os
import sys
from pathlib import Path

from specsampler.chores import Chores
from specsampler.storage import RuntimeData

intro = '''
SpecSampler: sampling sets from self-adjoint extensions, kernel and Lagrange
reconstruction series, and de Branges structure checks.
'''

truthy = ['true', '1', 'yes', 'y', 't']

home_dir = str(Path.home())
workdir = os.environ.get('WORKDIR', os.path.join(home_dir, '.specsampler'))
generate_report = (os.environ.get('GENERATE_REPORT', 'false').lower() in truthy)
default_seed = int(os.environ.get('SPECSAMPLER_SEED', '42'))
tolerance_override = os.environ.get('SPECSAMPLER_TOL')
limit_circle_kmax = int(os.environ.get('LIMIT_CIRCLE_KMAX', '200'))
limit_circle_tol = float(os.environ.get('LIMIT_CIRCLE_TOL', '1e-8'))

storage = RuntimeData()
chores = Chores(workdir=workdir, storage=storage, generate_report=generate_report)

logging_config = os.environ.get('LOGGING_CONFIG', '''
{
    "version": 1,
    "disable_existing_loggers": false,
    "formatters": {
        "simple": {
            "format": "%(asctime)s %(name)-12s %(levelname)-8s %(message)s"
        }
    },
    "handlers": {
        "stderr": {
            "class": "logging.StreamHandler",
            "level": "WARNING",
            "formatter": "simple",
            "stream": "ext://sys.stderr"
        },
        "file": {
            "class": "logging.FileHandler",
            "formatter": "simple",
            "filename": ''' + json.dumps(os.path.join(workdir, 'specsampler.log')) + ''',
            "mode": "w"
        }
    },
    "loggers": {
        "App": {
            "level": "DEBUG",
            "handlers": [
                "stderr",
                "file"
            ]
        }
    }
}''')

logging.config.dictConfig(json.loads(logging_config))


def resource_path(relative_path):
    """ Get absolute path to resource, works for dev and for PyInstaller """
    try:
        # PyInstaller creates a temp folder and stores path in _MEIPASS
        base_path = sys._MEIPASS
    except Exception:
        base_path = Path(__file__).parent.absolute()

    return os.path.join(base_path, relative_path)


with open(resource_path('shipped_models.json'), 'r') as f:
    shipped_models = json.load(f)
