"""Dog-whistle lexicon discovery engine.

Given a corpus and a set of seed dog whistles, the pipelines in this
package generate ranked candidate terms (static-embedding expansion,
masked-LM fill, euphemistic-phrase substitution, and the vector-lookup
DIRECT/PREDICT paths) and score them with the precision / data-potential-
recall / F0.5 protocol.
"""

__version__ = "0.1.0"
