import re
from setuptools import setup

version = re.search(
    r'^__version__\s*=\s*\'(.+)\'',
    open('hpdesign/__init__.py').read(),
    re.M).group(1)

with open('README.md', 'rb') as f:
    long_descr = f.read().decode('utf-8')

install_requires = [
    'numpy',
    'psutil',
    'scipy',
]

setup(
    name='hpdesign',
    packages=[
        'hpdesign',
        'hpdesign.quantum',
        'hpdesign.vqa',
    ],
    entry_points={
        'console_scripts': [
            'hpdesign=hpdesign.cli:main',
        ],
    },
    install_requires=install_requires,
    version=version,
    description='HP lattice protein design with simulated variational '
                'quantum algorithms',
    long_description=long_descr,
)
