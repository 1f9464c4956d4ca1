from .agreement import (  # noqa: F401
    ConstantInput,
    KappaResult,
    PearsonResult,
    cohens_kappa,
    pearson,
    percentage_agreement,
)
from .anova import (  # noqa: F401
    AnovaRow,
    AnovaTable,
    DegenerateDesign,
    Observation,
    ObservationTable,
    total_sum_of_squares,
    two_way_anova,
)
from .descriptive import (  # noqa: F401
    METRICS,
    POOLED,
    CellStats,
    DescriptiveReport,
    count_sentences,
    descriptive_stats,
    render_descriptive_text,
)
from .special import betainc, f_survival, normal_sf, t_sf_two_sided  # noqa: F401
