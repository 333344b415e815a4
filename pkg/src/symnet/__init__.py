"""Symplectic groups over Z/m: transvections, form nets of ideals and sandwich checks."""

from .extraction import (
    ShapeError,
    decompose_one_row,
    enumerate_one_row,
    length_discrepancy,
    level_extraction_check,
    long_parameter,
    one_row_matrix,
    random_one_row,
    shape_check,
)
from .harness import SUITES, CampaignConfig, InputError, SuiteResult, emit, parse_inputs, replay, run
from .indices import (
    EquivRel,
    HeightPair,
    IndexSet,
    PartitionError,
    all_equivalence_relations,
    base_tuples,
    height,
    height_at_least,
    make_equiv,
    sign,
)
from .localization import (
    CongruenceLevel,
    StandardSettingZm,
    congruence_membership,
    jacobson_corollary_check,
    patch_membership,
    project_matrix,
    project_net,
    s_closure,
)
from .nets import (
    FormNet,
    LevelSeed,
    NetError,
    closure_from_levels,
    diagonal_net,
    full_net,
    is_major,
    is_valid,
    nu_net,
    validate,
)
from .subgroups import (
    GeneratorSet,
    GeneratorWord,
    HypothesisError,
    ep_generator_set,
    ep_generators,
    product_length_identity_check,
    row_length,
    row_lengths,
    sample_word,
    sp_membership,
)
from .symplectic import (
    NotSymplecticError,
    SympMatrix,
    T,
    TransvectionSpec,
    commutator,
    identity,
    is_symplectic,
    steinberg_check,
    symp_inverse,
    transvection,
)
from .transporter import (
    is_in_transporter,
    normalization_witness,
    sandwich_check,
    shrink_level,
    transporter_report,
)
from .zmod import IdealZm, ModRing, crt_split, jacobson_radical

__version__ = "0.1.0"
