from pathlib import Path
from dotenv import load_dotenv
import os

load_dotenv()

REPORT_VERSION = "1"

DEFAULT_HEIGHT_BOUND = int(os.getenv("ELLMONO_HEIGHT_BOUND", "8"))
DEFAULT_MAX_ORBIT_SIZE = int(os.getenv("ELLMONO_MAX_ORBIT_SIZE", "1000"))

ROOT_TOLERANCE = float(os.getenv("ELLMONO_ROOT_TOL", "1e-10"))
POLE_TOLERANCE = float(os.getenv("ELLMONO_POLE_TOL", "1e-12"))

DEFAULT_SEED = int(os.getenv("ELLMONO_SEED", "0"))

LOG_LEVEL = os.getenv("ELLMONO_LOG_LEVEL", "WARNING").upper()
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

CSV_DIR = Path(os.getenv("ELLMONO_CSV_DIR", "reports"))
