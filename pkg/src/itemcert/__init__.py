"""itemcert: certification pipeline for AI-generated multiple-choice items.

The pipeline verifies the cognitive-taxonomy alignment of generated items
with an independent lexicon-based classifier, explains each prediction with
leave-one-out token attribution, screens for bias terms, triages items
through a traffic-light decision engine, routes ambiguous items to human
reviewers, and records every action in a hash-chained audit ledger.
"""

__version__ = "0.1.0"
