from setuptools import find_packages, setup

setup(
    name="mfch-lab",
    version="0.1.0",
    description="Numerical lab for the multicomponent functionalized Cahn-Hilliard model",
    packages=find_packages(include=["app", "app.*"]),
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.11",
        "pandas>=2.0",
        "pydantic>=2.5",
        "pydantic-settings>=2.1",
        "python-dotenv",
    ],
    extras_require={"test": ["pytest>=7.4", "hypothesis>=6.90"]},
    entry_points={"console_scripts": ["mfch=app.main:main"]},
)
