"""predcraft: prediction engineering over multi-table temporal data plus a
collaborative judging service for the resulting model reports.

The pipeline turns an outcome sentence into training examples (label,
segment), a feature matrix (featurize), and a scored model grid; authored
reports are then judged pairwise and ranked by Elo.
"""

from .entityset import (
    EntitySet,
    EventSlice,
    Relation,
    Table,
    build_time_index,
    export_entityset,
    generate_synthetic,
    load_entityset,
    sample_instances,
)
from .featurization import (
    FeatureMatrix,
    FeaturePrimitive,
    MatrixPreprocessor,
    SegmentFeaturizer,
    default_primitives,
    preprocess,
    synthesize,
)
from .labeling import (
    CutoffLabeler,
    CutoffSpec,
    LabelingFunction,
    LabelTuple,
    evaluate_label,
    set_cutoff_times,
    traverse,
    traverse_all,
)
from .modeling import (
    MLPBinaryClassifier,
    LinearSVMClassifier,
    ModelSpec,
    RandomForestBinaryClassifier,
    ScoredModel,
    auto_select,
    compute_metrics,
    enumerate_grid,
    train_and_score,
)
from .problemspace import (
    ProblemDefinition,
    compile_problem,
    enumerate_problems,
    load_templates,
    render_sentence,
)
from .segmentation import (
    LearningSegment,
    Segmenter,
    SegmentSpec,
    balance_classes,
    extract_segments,
    resolve_units,
    select_single,
)

__version__ = "0.1.0"
