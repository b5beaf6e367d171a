"""proofbench: a sequent-calculus workbench.

Parses proof databases (text DSL and XML, optionally gzipped), checks
LK/LKS proofs, instantiates proof schemata, eliminates cuts (reductive
and resolution-based), extracts Herbrand sequents, exports LaTeX/TPTP/
JSON, and serves a browser-based proof explorer.
"""

__version__ = "0.1.0"
