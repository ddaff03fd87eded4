"""Headless mobile web augmentation engine.

Provides:
- mowa.htmldom: lenient HTML tree, XPath subset, fragment editing
- mowa.appspec: declarative app model, XML parse/serialize, validation, bindings
- mowa.extractor: cached external-content extraction
- mowa.augmenters: augmenter catalog and layer application
- mowa.sensors: sensor trace parsing and context matching
- mowa.weaver: navigation/context session runtime
- mowa.evaluation: production grading and cohort statistics
- mowa.service: HTTP platform (publish, requests, authoring wizard)
- mowa.cli: command line front end
"""

__version__ = "0.1.0"
