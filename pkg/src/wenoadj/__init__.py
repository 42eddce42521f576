from wenoadj._backend import BACKEND
