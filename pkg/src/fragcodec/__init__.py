"""Fragment-based molecular string codecs (TSIS, TSID, SAFE) and tooling."""

__version__ = "0.1.0"
