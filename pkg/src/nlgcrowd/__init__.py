"""nlgcrowd: collect and quality-control NLG training data.

Pipeline pieces: MR schema and generation, textual and pictorial stimulus
rendering, submission validation, similarity scoring, corpus storage, and
the statistical analysis of a collected corpus.
"""

__version__ = "0.1.0"

from .schema import (  # noqa: F401
    AttributeKind,
    AttributeSpec,
    DomainSchema,
    MeaningRepresentation,
    canonical_textual_mr,
    load_schema,
    mr_char_length,
    parse_textual_mr,
    serialize_textual_mr,
)
