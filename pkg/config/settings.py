# config/settings.py
import os
from pathlib import Path

import yaml
from dotenv import load_dotenv

# Base paths
BASE_DIR = Path(__file__).resolve().parent.parent
CONFIG_PATH = Path(os.getenv('COARSEKIT_CONFIG', BASE_DIR / 'config' / 'coarsekit_config.yaml'))

load_dotenv(BASE_DIR / '.env')

# Load toolkit config
with open(CONFIG_PATH, 'r') as file:
    COARSEKIT_CONFIG = yaml.safe_load(file)


def _env_int(name, default):
    value = os.getenv(name)
    if value is None or value.strip() == '':
        return default
    return int(value)


# Scale grid defaults
GRID_SETTINGS = {
    'r_grid': tuple(float(v) for v in COARSEKIT_CONFIG['grids']['r_grid']),
    's_grid': tuple(float(v) for v in COARSEKIT_CONFIG['grids']['s_grid']),
    'r_bound': float(COARSEKIT_CONFIG['grids']['r_bound']),
    't_bound': float(COARSEKIT_CONFIG['grids']['t_bound']),
    'n_max': int(COARSEKIT_CONFIG['grids']['n_max']),
    'windows': tuple(int(w) for w in COARSEKIT_CONFIG['windows']),
}

# Size caps for word balls and subgroup closures
CAP_SETTINGS = {
    'ball_cap': _env_int('COARSEKIT_BALL_CAP', COARSEKIT_CONFIG['caps']['ball_cap']),
    'closure_cap': _env_int('COARSEKIT_CLOSURE_CAP', COARSEKIT_CONFIG['caps']['closure_cap']),
    'hom_check_radius': int(COARSEKIT_CONFIG['caps']['hom_check_radius']),
}

# Input validation
VALIDATION_SETTINGS = {
    'metric_tolerance': float(COARSEKIT_CONFIG['validation']['metric_tolerance']),
    'pou_tolerance': float(COARSEKIT_CONFIG['validation']['pou_tolerance']),
}

# Light-structure search limits
LIGHT_SETTINGS = {
    'n_to_1_exact_max_n': int(COARSEKIT_CONFIG['light']['n_to_1_exact_max_n']),
    'n_to_1_exact_max_points': int(COARSEKIT_CONFIG['light']['n_to_1_exact_max_points']),
}

# Batch run settings
RUN_SETTINGS = {
    'threads': _env_int('COARSEKIT_THREADS', os.cpu_count() or 1),
    'format': COARSEKIT_CONFIG['output']['format'],
    'float_format': COARSEKIT_CONFIG['output']['float_format'],
}

# Logging Settings
LOG_LEVEL = os.getenv('COARSEKIT_LOG_LEVEL', 'INFO').upper()
LOG_FILE = os.getenv('COARSEKIT_LOG_FILE')

LOGGING_CONFIG = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'standard': {
            'format': '%(asctime)s [%(levelname)s] %(name)s: %(message)s'
        },
    },
    'handlers': {
        'default': {
            'level': LOG_LEVEL,
            'formatter': 'standard',
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
        },
    },
    'loggers': {
        '': {
            'handlers': ['default'],
            'level': LOG_LEVEL,
            'propagate': True
        }
    }
}

if LOG_FILE:
    LOGGING_CONFIG['handlers']['file'] = {
        'level': LOG_LEVEL,
        'formatter': 'standard',
        'class': 'logging.FileHandler',
        'filename': LOG_FILE,
        'mode': 'a',
    }
    LOGGING_CONFIG['loggers']['']['handlers'].append('file')
