"""Conjugacy decision procedures for ascending HNN-extensions of free groups.

The pipeline reduces HNN conjugacy to twisted-conjugacy and exponent-pair
searches over an injective base endomorphism, which in turn rest on free
group word algebra, Stallings automata and iterated-pullback dynamics.
Every Yes answer carries a witness checked by pure word algebra; every No
carries an analytic certificate; bounded stand-ins for research-grade
subroutines answer Inconclusive when their budget runs out.
"""

from .decision import Bounds, Decision, DEFAULT_BOUNDS, inconclusive, no, yes
from .words import (
    Alphabet,
    BadLetterError,
    Word,
    concat,
    cyclic_reduce,
    cyclic_word,
    free_conjugacy,
    invert,
    is_primitive,
    reduce,
    root,
    whitehead_minimize,
)
from .stallings import (
    CoreGraph,
    SubgroupSystem,
    Witness,
    carries,
    conjugate_into,
    fold,
    pullback,
)
from .endo import (
    Endomorphism,
    ImageProbe,
    Retraction,
    compose,
    format_endomorphism,
    identity,
    nielsen_reduce,
    nielsen_retract,
    parse_endomorphism,
    power,
    preimage_subgroup,
    pullback_element,
    stable_image_probe,
)
from .twisted import (
    BoundedFixedSubgroupOracle,
    TwistedInstance,
    encode_fixed,
    phi_n_twisted_pairs,
    twisted_conjugate,
    twisted_iterate_witness,
)
from .dynamics import (
    PullbackStage,
    StableIterate,
    carried_by_stable,
    pullback_stage,
    stable_iterate_search,
)
from .brinkmann import (
    ExponentPair,
    IntegerExpInstance,
    equality_kernel_pair,
    equality_pair,
    integer_exp_solve,
    retract_lift_conj,
    single_exponent_conj,
    twisted_pair_general,
    two_exp_general,
    two_exp_injective,
    two_exp_outside_image,
    two_exp_technical,
)
from .hnn import (
    ConjugacyWitness,
    HnnElement,
    HnnPresentation,
    NonInjectiveError,
    conj,
    retraction_exponent,
    rewrite,
    verify_witness,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
