from setuptools import setup, find_packages

with open("README.md", encoding="utf-8") as readme_file:
    README = readme_file.read()

setup_args = dict(
    name="wcolab",
    version="0.1.0",
    description="Numerical experiments on weighted composition operators over Hardy and Bergman spaces.",
    long_description_content_type="text/markdown",
    long_description=README,
    license="MIT",
    include_package_data=True,
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    python_requires=">=3.8",
    keywords=["Operator theory", "Composition operators", "Hardy space", "Bergman space"],
    entry_points={"console_scripts": ["wcolab=wcolab.cli:main"]},
)

required = ["numpy", "scipy", "sympy", "pandas", "numba"]

if __name__ == "__main__":
    setup(**setup_args, install_requires=required)
