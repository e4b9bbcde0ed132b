"""Voice-guided prehospital stroke assessment service.

Subpackages:
    assessment  pure domain layer (schema, rubric, classification, report)
    agents      multi-agent orchestration engine
    gateway     duplex session protocol, persistence, backend boundary
    scripted    deterministic conversation backend with fault injection
    harness     scenario fixtures, end-to-end driver, metrics pipeline
"""

__version__ = "0.1.0"
