# flake8: noqa
from .exact import *
from .kclass import *
from .weight_one import verify_lemma21, verify_main_chain
from .ledger import theorem_grr_certify
