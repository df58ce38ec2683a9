from typing import Callable, Dict

from spatialdensity.config import RunConfig
from spatialdensity.helpers.filemanager import FileManager

from .bayes import run_bayes
from .bench import run_bench
from .detect import run_detect, run_inject, run_roc
from .fit import run_fit
from .simulate import run_simulate

RUNNERS: Dict[str, Callable[[RunConfig, FileManager], object]] = {
    "fit": run_fit,
    "simulate": run_simulate,
    "inject": run_inject,
    "detect": run_detect,
    "roc": run_roc,
    "bench": run_bench,
    "bayes": run_bayes,
}

__all__ = [
    "RUNNERS",
    "run_bayes",
    "run_bench",
    "run_detect",
    "run_fit",
    "run_inject",
    "run_roc",
    "run_simulate",
]
