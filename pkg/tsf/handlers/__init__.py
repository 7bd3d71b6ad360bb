from . import errors
from . import synth
from . import preprocess
from . import train
from . import evaluate
from . import loso
from . import analyze
