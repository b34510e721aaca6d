"""Exception types shared across the pipeline."""


class PipelineError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(PipelineError):
    """Invalid or incomplete pipeline configuration."""


class EmptyVocabulary(PipelineError):
    """No word in the training corpus reached ``min_count``."""


class MalformedModelFile(PipelineError):
    """A word-vector file violates the declared text format."""


class OutOfVocabulary(PipelineError):
    """Lookup of a word absent from the embedding vocabulary."""

    def __init__(self, word: str):
        super().__init__(f"word not in vocabulary: {word!r}")
        self.word = word


class ZeroNormVector(PipelineError):
    """Cosine similarity is undefined for a zero-norm vector."""


class EmptyGroupInVocabulary(PipelineError):
    """None of a reference group's words is in the embedding vocabulary."""


class AllTokensOOV(PipelineError):
    """Attention weights are undefined when every token is out of vocabulary."""


class UnknownCategory(PipelineError):
    """A category was requested that the annotation does not carry."""


class UnclassifiableSentence(PipelineError):
    """A score was requested for a sentence flagged unclassifiable."""


class MissingPrediction(PipelineError):
    """A gold sentence has no matching prediction."""

    def __init__(self, sentence_id: str):
        super().__init__(f"no prediction for sentence {sentence_id!r}")
        self.sentence_id = sentence_id


class UnknownGoldLabel(PipelineError):
    """A gold label does not name a configured category."""


class EmptyInput(PipelineError):
    """An aggregate was requested over an empty collection."""
