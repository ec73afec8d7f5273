"""Kirby diagrams as data: framed links, moves, and the invariants used to certify them."""

from .diagram import (
    Band,
    Component,
    Crossing,
    DiagramError,
    DiagramSyntaxError,
    DiagramValidationError,
    Framing,
    LinkDiagram,
    TwistBox,
    canonical_form,
    closed_braid,
    diagrams_isomorphic,
    expand_twist_boxes,
    from_pd,
    linking_matrix,
    linking_number,
    parse_diagram,
    serialize_diagram,
    unlink,
    writhe,
)
from .laurent import LaurentPolynomial
from .moves import MoveError, band_surgery, cancel_hopf_pair, handleslide, slam_dunk, slide_under_one_handle
from .homology import AbelianInvariants, check_rbg_homology, check_rlink_homology, h1_of_surgery, smith_normal_form
from .concordance import (
    CurveSystem,
    SeifertMatrix,
    alexander_polynomial,
    derivative_check,
    fibered_necessary,
    fox_milnor,
    seifert_surface,
    signature,
)
from .pi1 import GroupPresentation, certify_free, surgered_presentation, tietze_simplify, wirtinger
from .script import Move, MoveScript, parse_script, replay
from .search import SearchBudget, band_search, certify_unknot, certify_unlink, simplify

__version__ = "0.1.0"
