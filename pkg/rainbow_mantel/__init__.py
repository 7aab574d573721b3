"""Rainbow Mantel toolkit: rainbow-triangle-free graph triples and their density threshold."""

__version__ = "0.1.0"
__description__ = (
    "Constructions, exact searches, lemma checks and an infeasibility certificate "
    "for the rainbow version of Mantel's theorem"
)
