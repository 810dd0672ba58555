"""khext: extreme and almost-extreme Khovanov homology of link diagrams.

The library builds the cube of resolutions of a link diagram, classifies
the combinatorics of each resolved state, assembles two chain complexes
(`F`, circle-based, and `M`, component/edge-based) that compute the
almost-extreme Khovanov group, and cross-checks everything against an
independent brute-force Khovanov homology oracle.

Entry points
------------
* :mod:`khext.ingest`     -- parse PD codes and chord-diagram text
* :mod:`khext.statecube`  -- the cube of resolutions
* :mod:`khext.configs`    -- configuration detection / state classification
* :mod:`khext.functors`   -- the chain complexes ``F`` and ``M`` and the
                             comparison isomorphism between them
* :mod:`khext.extreme`    -- extreme grading: Lando graph, independence
                             complexes, poset duality
* :mod:`khext.decomp`     -- subposet decomposition, skein sequences,
                             diagram simplification
* :mod:`khext.oracle`     -- independent Khovanov homology computation
* :mod:`khext.cli`        -- the ``khext`` command line tool
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
