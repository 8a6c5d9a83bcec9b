import numpy as np, math
from nist_examples import *
from scipy.special import gammaincc
f=open('/tmp/e.txt').read(); e=[int(c) for c in '10'+f[:999998]]
print("monobit",monobit(e))
print("blockfreq128",blockfreq(e,128))
print("runs",runs(e))
print("cusum",cusum(e),cusum(e,True))
print("dft",dft(e))
print("serial2",serial(e,2))
print("apen10",apen(e,10))
print("longest10000", longest(e,10000,6,[10,11,12,13,14,15,16],[0.0882,0.2092,0.2483,0.1933,0.1208,0.0675,0.0727]))
print("nonover000000001", nonoverlap(e,[0,0,0,0,0,0,0,0,1],8))
def overlapping(e,m=9,M=1032,K=5,pis=None):
    n=len(e);N=n//M;nu=[0]*(K+1);B=[1]*m
    for j in range(N):
        b=e[j*M:(j+1)*M];W=sum(1 for i in range(M-m+1) if b[i:i+m]==B);nu[min(W,K)]+=1
    chi=sum((nu[i]-N*pis[i])**2/(N*pis[i]) for i in range(K+1));return gammaincc(K/2,chi/2)
print("overlap old",overlapping(e,pis=[0.324652,0.182617,0.142670,0.106645,0.077147,0.166269]))
print("overlap new",overlapping(e,pis=[0.364091,0.185659,0.139381,0.100571,0.070432,0.139865]))
def lincomp(e,M,K=6):
    n=len(e);N=n//M
    mu=M/2+(9+(-1)**(M+1))/36-(M/3+2/9)/2**M
    pis=[0.010417,0.03125,0.125,0.5,0.25,0.0625,0.020833]; nu=[0]*7
    for j in range(N):
        L=berlekamp(e[j*M:(j+1)*M]); T=(-1)**M*(L-mu)+2/9
        if T<=-2.5: nu[0]+=1
        elif T<=-1.5: nu[1]+=1
        elif T<=-0.5: nu[2]+=1
        elif T<=0.5: nu[3]+=1
        elif T<=1.5: nu[4]+=1
        elif T<=2.5: nu[5]+=1
        else: nu[6]+=1
    chi=sum((nu[i]-N*pis[i])**2/(N*pis[i]) for i in range(7)); return gammaincc(K/2,chi/2)
print("lincomp1000",lincomp(e,1000))
print("lincomp500",lincomp(e,500))
