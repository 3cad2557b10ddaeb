from ._classical import (
    allowed_signatures,
    arf_check,
    branched_cover_check,
    branched_rank_check,
    gcd_conflicts,
    gcd_pair_check,
    genus_pair_bound,
    genus_pair_check,
    signature_twist_check,
    torus_arf_allowed,
)
from ._concurrency import analyze_many, analyze_many_async
from ._config import CHECKS, AnalysisConfig
from ._dataset import (
    build_record,
    find_knot,
    load_bundled,
    load_dataset,
    parse_construction,
)
from ._engine import (
    CONVENTION_NOTE,
    AnalysisReport,
    analyze,
    candidates,
    run_checks,
)
from ._exceptions import (
    ConsistencyError,
    ConventionError,
    DatasetError,
    DatasetParseError,
    DomainError,
    JumpPointError,
    UnknownKnotError,
    UntwistError,
)
from ._floer import (
    PartialV,
    alternating_allowed,
    alternating_v,
    forced_v_check,
    l_interval,
    nu_bounds,
    partner_table,
    partner_v_check,
    required_v,
    upsilon_check,
    upsilon_from_v,
    upsilon_lower_bound,
    upsilon_of,
    upsilon_upper_bound,
    v_feasible,
)
from ._forms import (
    DSpectrum,
    LinkingSet,
    bounding_side,
    candidate_forms,
    coset_labeller,
    d_invariant_check,
    d_match_check,
    lens_d,
    lens_spectrum,
    lens_spin_d,
    linking_form_check,
    m_q,
    selflink_set,
    spin_d_double_cover,
    surgery_d,
    surviving_forms,
)
from ._knots import (
    KnotRecord,
    TorusData,
    VSequence,
    arf_from_determinant,
    connected_sum,
    mirror,
    torsion_v,
    torus_alexander,
    torus_knot,
    two_bridge_signature,
)
from ._models import ObstructionResult, Status, TwistIndex, TwistVerdict
from ._numeric import (
    Form2,
    PLFunction,
    bracket,
    enumerate_forms,
    format_rational,
    pl_combine,
    pl_max,
    residue,
)
from ._signatures import (
    signature_at,
    torus_signature,
    torus_signature_at,
    torus_signature_bounds,
    torus_signature_samples,
)
from ._table import (
    ExpectedRow,
    TableDiff,
    TableRow,
    load_bundled_table,
    load_expected_table,
    reproduce_table,
)

__all__ = [
    # analysis
    "analyze",
    "analyze_many",
    "analyze_many_async",
    "candidates",
    "run_checks",
    "AnalysisConfig",
    "AnalysisReport",
    "CHECKS",
    "CONVENTION_NOTE",
    # models
    "TwistIndex",
    "Status",
    "ObstructionResult",
    "TwistVerdict",
    # knots
    "KnotRecord",
    "TorusData",
    "VSequence",
    "arf_from_determinant",
    "two_bridge_signature",
    "torus_alexander",
    "torsion_v",
    "torus_knot",
    "mirror",
    "connected_sum",
    # numeric
    "PLFunction",
    "pl_combine",
    "pl_max",
    "Form2",
    "enumerate_forms",
    "residue",
    "bracket",
    "format_rational",
    # signatures
    "torus_signature",
    "torus_signature_bounds",
    "torus_signature_at",
    "torus_signature_samples",
    "signature_at",
    # classical obstructions
    "arf_check",
    "torus_arf_allowed",
    "allowed_signatures",
    "signature_twist_check",
    "gcd_conflicts",
    "gcd_pair_check",
    "genus_pair_bound",
    "genus_pair_check",
    "branched_rank_check",
    "branched_cover_check",
    # Heegaard Floer obstructions
    "PartialV",
    "alternating_v",
    "alternating_allowed",
    "required_v",
    "l_interval",
    "nu_bounds",
    "partner_table",
    "partner_v_check",
    "v_feasible",
    "forced_v_check",
    "upsilon_from_v",
    "upsilon_lower_bound",
    "upsilon_upper_bound",
    "upsilon_check",
    "upsilon_of",
    # forms and d-invariants
    "LinkingSet",
    "selflink_set",
    "DSpectrum",
    "lens_d",
    "lens_spectrum",
    "lens_spin_d",
    "surgery_d",
    "spin_d_double_cover",
    "coset_labeller",
    "m_q",
    "d_match_check",
    "bounding_side",
    "candidate_forms",
    "surviving_forms",
    "linking_form_check",
    "d_invariant_check",
    # datasets
    "load_dataset",
    "load_bundled",
    "build_record",
    "parse_construction",
    "find_knot",
    # tables
    "ExpectedRow",
    "TableRow",
    "TableDiff",
    "load_expected_table",
    "load_bundled_table",
    "reproduce_table",
    # exceptions
    "UntwistError",
    "DomainError",
    "JumpPointError",
    "DatasetError",
    "DatasetParseError",
    "ConsistencyError",
    "UnknownKnotError",
    "ConventionError",
]

__version__ = "0.1.0"


__locals = locals()
for __name in __all__:
    if not __name.startswith("__") and hasattr(__locals[__name], "__module__"):
        try:
            setattr(__locals[__name], "__module__", "untwist")  # noqa
        except (AttributeError, TypeError):  # pragma: nocover
            pass
