import setuptools

with open("README.md", "r", encoding="utf-8") as f:
    long_description = f.read()

setuptools.setup(
    name="graminspect",
    version="1.0.0",
    author="Noah H. Kleinschmidt",
    author_email="noah.kleinschmidt@students.unibe.ch",
    description="A python package to detect and diagnose grammatical errors in Chinese learner text",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=[
        "graminspect",
        "graminspect.main",
        "graminspect.stats",
        "graminspect.Plotters",
        "graminspect.Readers",
        "graminspect.Pipes",
        "graminspect.Graphs",
        "graminspect.Layers",
        "graminspect.Tagger",
        "graminspect.Ensemble",
        "graminspect.numerics",
        "graminspect.cli",
        "graminspect.defaults",
        "graminspect._auxiliary",
        "graminspect._auxiliary.warnings",
    ],
    install_requires=[
        "numpy",
        "pandas>=1.5",
        "scipy",
        "matplotlib",
        "seaborn",
        "tqdm",
    ],
    extras_require={
        "test": ["pytest", "hypothesis"],
    },
    entry_points={
        "console_scripts": ["graminspect=graminspect.cli:main"],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
        "Natural Language :: Chinese (Simplified)",
    ],
    python_requires=">=3.8",
)
