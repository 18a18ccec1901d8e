from setuptools import find_packages, setup

setup(
    name="address-network",
    version="1.0.0",
    description="Address-network reconstruction and wealth dynamics of UTXO chains",
    package_dir={"": "src"},
    packages=find_packages("src", include=["address_network", "address_network.*"]),
    python_requires=">=3.10",
    install_requires=[
        "python-dotenv>=1.0.0",
        "pandas>=2.1",
        "numpy>=1.26",
        "networkx>=3.2",
        "pydantic>=2.5",
        "pyyaml>=6.0",
        "tqdm>=4.66",
    ],
    extras_require={"test": ["pytest>=8.0"]},
    entry_points={"console_scripts": ["address-network=address_network.cli.main:main"]},
)
